"""Commutation graphs and the combinatorics of admissible sets.

Vertex sets are handled internally as integer bitmasks over the input
vertex order; the public functions return tuples of vertex names in that
order so that output is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Malformed graph input or unknown vertex name."""


class CommutationGraph:
    """A finite simple graph whose edges declare commuting generators."""

    def __init__(self, vertices: Sequence[str], edges: Iterable[Sequence[str]]):
        vertices = tuple(vertices)
        if not vertices:
            raise GraphError("graph has no vertices")
        index = {}
        for pos, name in enumerate(vertices):
            if not isinstance(name, str) or not name:
                raise GraphError(f"bad vertex name {name!r}")
            if name in index:
                raise GraphError(f"duplicate vertex {name!r}")
            index[name] = pos
        adj = [0] * len(vertices)
        for edge in edges:
            if len(edge) != 2:
                raise GraphError(f"edge must have two endpoints: {edge!r}")
            u, v = edge
            for end in (u, v):
                if end not in index:
                    raise GraphError(f"edge {edge!r} has unknown endpoint {end!r}")
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            i, j = index[u], index[v]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self.vertices = vertices
        self.index = index
        self.n = len(vertices)
        self.full = (1 << self.n) - 1
        # adjacency and closed-neighbourhood masks per vertex index
        self.adj = tuple(adj)
        self.st = tuple(a | (1 << i) for i, a in enumerate(adj))

    def __repr__(self) -> str:
        return f"CommutationGraph({list(self.vertices)!r}, {list(self.edges)!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CommutationGraph)
            and self.vertices == other.vertices
            and self.adj == other.adj
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.adj))

    @cached_property
    def edges(self) -> tuple[tuple[str, str], ...]:
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.adj[i] >> j & 1:
                    out.append((self.vertices[i], self.vertices[j]))
        return tuple(out)

    # -- conversions between names and masks --

    def vid(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise GraphError(f"unknown vertex {name!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for name in names:
            m |= 1 << self.vid(name)
        return m

    def names(self, mask: int) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def ordered(self, names: Iterable[str]) -> tuple[str, ...]:
        return self.names(self.mask(names))

    def adjacent(self, u: str, v: str) -> bool:
        return bool(self.adj[self.vid(u)] >> self.vid(v) & 1)

    def subgraph(self, names: Iterable[str]) -> "CommutationGraph":
        keep = self.ordered(names)
        kept = set(keep)
        return CommutationGraph(keep, [e for e in self.edges if e[0] in kept and e[1] in kept])

    # -- mask-level set operations --

    def star_mask(self, mask: int) -> int:
        out = self.full
        i = 0
        while mask:
            if mask & 1:
                out &= self.st[i]
            mask >>= 1
            i += 1
        return out

    def closure_mask(self, mask: int) -> int:
        return self.star_mask(self.star_mask(mask))

    @cached_property
    def admissible_masks(self) -> tuple[int, ...]:
        return tuple(self.star_mask(self.adj[i]) for i in range(self.n))

    def is_clique(self, mask: int) -> bool:
        return all(not (mask >> i & 1) or (mask & ~self.st[i]) == 0 for i in range(self.n))

    def components_mask(self, mask: int) -> list[int]:
        """Connected components of the induced subgraph on ``mask``."""
        comps = []
        left = mask
        while left:
            seed = left & -left
            comp = seed
            frontier = seed
            while frontier:
                low = frontier & -frontier
                frontier ^= low
                i = low.bit_length() - 1
                new = self.adj[i] & mask & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            left &= ~comp
        return comps


def complete_graph(n: int) -> CommutationGraph:
    vs = [f"x{i}" for i in range(1, n + 1)]
    return CommutationGraph(vs, [(u, v) for i, u in enumerate(vs) for v in vs[i + 1:]])


def null_graph(n: int) -> CommutationGraph:
    return CommutationGraph([f"x{i}" for i in range(1, n + 1)], [])


def path_graph(n: int) -> CommutationGraph:
    vs = [f"x{i}" for i in range(1, n + 1)]
    return CommutationGraph(vs, list(zip(vs, vs[1:])))


# -- public set operations (names in, ordered names out) --

def star(g: CommutationGraph, y: Iterable[str]) -> tuple[str, ...]:
    return g.names(g.star_mask(g.mask(y)))


def link(g: CommutationGraph, x: str) -> tuple[str, ...]:
    return g.names(g.adj[g.vid(x)])


def closure(g: CommutationGraph, y: Iterable[str]) -> tuple[str, ...]:
    return g.names(g.closure_mask(g.mask(y)))


def admissible(g: CommutationGraph, x: str) -> tuple[str, ...]:
    return g.names(g.admissible_masks[g.vid(x)])


def sim_class(g: CommutationGraph, x: str) -> tuple[str, ...]:
    return g.names(class_mask(g, g.vid(x)))


def class_mask(g: CommutationGraph, i: int) -> int:
    target = g.admissible_masks[i]
    m = 0
    for j, a in enumerate(g.admissible_masks):
        if a == target:
            m |= 1 << j
    return m


@dataclass(frozen=True)
class ClassInfo:
    """The splitting of an admissible set into class, short and outer parts."""

    rep: str
    members: tuple[str, ...]
    short: tuple[str, ...]
    outer: tuple[str, ...]
    abelian: bool

    @property
    def p(self) -> int:
        return len(self.members)

    @property
    def q(self) -> int:
        return len(self.members) + len(self.short)


def class_partition(g: CommutationGraph, x: str) -> ClassInfo:
    i = g.vid(x)
    adm = g.admissible_masks[i]
    cls = class_mask(g, i)
    cl = g.closure_mask(1 << i)
    abelian = adm == cl
    # in the free case the class is not inside cl(x), so it is removed from the outer part too
    short = cl & ~cls
    outer = adm & ~cl & ~cls
    return ClassInfo(x, g.names(cls), g.names(short), g.names(outer), abelian)


@dataclass(frozen=True)
class LatticeNode:
    admissible: tuple[str, ...]
    members: tuple[str, ...]
    height: int


@dataclass(frozen=True)
class AdmissibleLattice:
    """Distinct admissible sets ordered by inclusion, with heights and levels."""

    graph: CommutationGraph
    nodes: tuple[LatticeNode, ...]
    cover_edges: tuple[tuple[int, int], ...]
    transversal: tuple[str, ...]
    height_max: int

    def node_of(self, x: str) -> LatticeNode:
        return next(n for n in self.nodes if x in n.members)

    def height(self, x: str) -> int:
        return self.node_of(x).height

    def level(self, k: int) -> tuple[str, ...]:
        """v(k): vertices of height k."""
        return self.graph.ordered(v for n in self.nodes if n.height == k for v in n.members)

    def reps(self, k: int) -> tuple[str, ...]:
        """Transversal members of height k."""
        return tuple(y for y in self.transversal if self.height(y) == k)

    def union(self, k: int) -> tuple[str, ...]:
        """Union of admissible sets of all vertices of height at most k."""
        return self.graph.ordered(v for n in self.nodes if n.height <= k for v in n.admissible)

    def cover_pairs(self) -> tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]:
        return tuple((self.nodes[i].admissible, self.nodes[j].admissible) for i, j in self.cover_edges)

    def to_dot(self) -> str:
        lines = ["digraph admissible {", "  rankdir=BT;"]
        for k, node in enumerate(self.nodes):
            label = "{" + ",".join(node.admissible) + "}\\n[" + ",".join(node.members) + "] h=" + str(node.height)
            lines.append(f'  n{k} [label="{label}"];')
        for i, j in self.cover_edges:
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_lattice(g: CommutationGraph, transversal: Sequence[str] | None = None) -> AdmissibleLattice:
    masks = []
    for a in g.admissible_masks:
        if a not in masks:
            masks.append(a)
    # order nodes by their least member so output follows vertex order
    masks.sort(key=lambda a: min(j for j, b in enumerate(g.admissible_masks) if b == a))
    below = {a: [b for b in masks if b != a and b & ~a == 0] for a in masks}
    height: dict[int, int] = {}

    def h(a: int) -> int:
        if a not in height:
            height[a] = max((h(b) + 1 for b in below[a]), default=0)
        return height[a]

    nodes = []
    for a in masks:
        members = g.names(sum(1 << j for j, b in enumerate(g.admissible_masks) if b == a))
        nodes.append(LatticeNode(g.names(a), members, h(a)))
    covers = []
    for j, a in enumerate(masks):
        for b in below[a]:
            if not any(c != b and b & ~c == 0 and c in below[a] for c in below[a]):
                covers.append((masks.index(b), j))
    covers.sort()
    if transversal is None:
        trans = tuple(n.members[0] for n in nodes)
    else:
        trans = tuple(transversal)
        for n in nodes:
            if sum(1 for y in trans if y in n.members) != 1:
                raise GraphError(f"transversal must pick exactly one vertex of class {n.members}")
        trans = tuple(sorted(trans, key=g.vid))
    return AdmissibleLattice(g, tuple(nodes), tuple(covers), trans, max(height.values()))
