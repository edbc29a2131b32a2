"""Whitehead automorphisms of partially commutative groups.

Type 1 automorphisms permute the letters ``L = X u X^-1`` compatibly with
inversion and the graph.  A Type 2 automorphism ``(A, a)`` sends a
generator ``x`` (of vertex other than that of ``a``) to
``a^-1 x a`` when ``x, x^-1`` are both in ``A``, to ``x a`` when only ``x``
is, to ``a^-1 x`` when only ``x^-1`` is, and fixes it otherwise.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .endomap import EndoMap
from .graph import CommutationGraph, GraphError, class_partition
from .words import Word, inverse as word_inverse, letter_key, letter_name, normal_form, parse_letter


class WhiteheadError(ValueError):
    """Invalid Whitehead automorphism data."""


class WhiteheadAuto:
    """A Type 1 or Type 2 Whitehead automorphism; equality is by action on X."""

    __slots__ = ("graph", "perm", "A", "a", "parts", "_endo", "_key")

    def __init__(self, graph: CommutationGraph, perm: tuple[int, ...] | None = None,
                 A: frozenset[int] | None = None, a: int | None = None,
                 parts: tuple | None = None):
        self.graph = graph
        self.perm = perm
        self.A = A
        self.a = a
        self.parts = parts
        self._endo = None
        self._key = None

    # -- structure --

    @property
    def is_type1(self) -> bool:
        return self.perm is not None

    @property
    def is_identity(self) -> bool:
        return self.endo.is_identity

    def letter_image(self, l: int) -> Word:
        if self.perm is not None:
            m = self.perm[abs(l) - 1]
            return (m,) if l > 0 else (-m,)
        v = abs(l)
        if v == abs(self.a):
            return (l,)
        out = []
        if -v in self.A:
            out.append(-self.a)
        out.append(v)
        if v in self.A:
            out.append(self.a)
        return tuple(out) if l > 0 else word_inverse(out)

    @property
    def endo(self) -> EndoMap:
        if self._endo is None:
            g = self.graph
            imgs = [normal_form(g, self.letter_image(i + 1)) for i in range(g.n)]
            inv = self.inverse()
            inv_imgs = [normal_form(g, inv.letter_image(i + 1)) for i in range(g.n)]
            self._endo = EndoMap(g, imgs, inv_imgs)
        return self._endo

    def apply(self, w: Iterable[int]) -> Word:
        return self.endo.apply(w)

    def __eq__(self, other) -> bool:
        return isinstance(other, WhiteheadAuto) and self.endo.images == other.endo.images

    def __hash__(self) -> int:
        return hash(self.endo.images)

    def __repr__(self) -> str:
        return f"<{self.text()}>"

    @property
    def key(self) -> tuple:
        """Deterministic structural sort key."""
        if self._key is None:
            if self.perm is not None:
                self._key = (0, tuple(letter_key(m) for m in self.perm))
            else:
                self._key = (1, letter_key(self.a), len(self.A),
                             tuple(sorted(letter_key(l) for l in self.A)))
        return self._key

    def inverse(self) -> "WhiteheadAuto":
        if self.perm is not None:
            inv = [0] * len(self.perm)
            for i, m in enumerate(self.perm):
                inv[abs(m) - 1] = (i + 1) if m > 0 else -(i + 1)
            return WhiteheadAuto(self.graph, perm=tuple(inv))
        A = (self.A - {self.a}) | {-self.a}
        return WhiteheadAuto(self.graph, A=frozenset(A), a=-self.a, parts=self.parts)

    # -- naming --

    def letters_text(self, letters: Iterable[int]) -> str:
        return ", ".join(letter_name(self.graph, l) for l in sorted(letters, key=letter_key))

    def cycles(self) -> list[tuple[int, ...]]:
        assert self.perm is not None
        img = {}
        for i, m in enumerate(self.perm):
            img[i + 1] = m
            img[-(i + 1)] = -m
        done = set()
        out = []
        for l in sorted(img, key=letter_key):
            if l in done or img[l] == l:
                continue
            cyc = [l]
            done.add(l)
            m = img[l]
            while m != l:
                cyc.append(m)
                done.add(m)
                m = img[m]
            out.append(tuple(cyc))
        return out

    def cycles_text(self) -> str:
        return "".join("(" + " ".join(letter_name(self.graph, l) for l in c) + ")" for c in self.cycles())

    def inversion_of(self) -> int | None:
        """Vertex index if this is a single inversion."""
        if self.perm is None:
            return None
        moved = [i for i, m in enumerate(self.perm) if m != i + 1]
        if len(moved) == 1 and self.perm[moved[0]] == -(moved[0] + 1):
            return moved[0]
        return None

    def transvection_of(self) -> tuple[int, int] | None:
        """``(t, a)`` if this is the elementary transvection ``t -> t a``."""
        if self.perm is None and len(self.A) == 2:
            (t,) = self.A - {self.a}
            return t, self.a
        return None

    def text(self) -> str:
        g = self.graph
        if self.perm is not None:
            inv = self.inversion_of()
            if inv is not None:
                return f"inv {g.vertices[inv]}"
            if all(m == i + 1 for i, m in enumerate(self.perm)):
                return "perm ()"
            return "perm " + self.cycles_text()
        tv = self.transvection_of()
        if tv is not None:
            return f"tau {letter_name(g, tv[0])} {letter_name(g, tv[1])}"
        return "wh {" + self.letters_text(self.A) + "} " + letter_name(g, self.a)

    def symbol(self, rep: str | None = None) -> str:
        g = self.graph
        if self.perm is not None:
            inv = self.inversion_of()
            if inv is not None:
                return f"inv:{g.vertices[inv]}"
            return f"perm:{rep or ''}:{self.cycles_text()}"
        tv = self.transvection_of()
        if tv is not None:
            return f"tau:{letter_name(g, tv[0])}:{letter_name(g, tv[1])}"
        return "wh:{" + ",".join(letter_name(g, l) for l in sorted(self.A, key=letter_key)) + "}:" + letter_name(g, self.a)


# -- constructors --

def identity(g: CommutationGraph) -> WhiteheadAuto:
    return WhiteheadAuto(g, perm=tuple(range(1, g.n + 1)))


def inversion(g: CommutationGraph, x: str) -> WhiteheadAuto:
    i = g.vid(x)
    perm = list(range(1, g.n + 1))
    perm[i] = -(i + 1)
    return WhiteheadAuto(g, perm=tuple(perm))


def make_type1(g: CommutationGraph, mapping: dict[int, int]) -> WhiteheadAuto:
    """Type 1 automorphism from a partial letter map, completed by inversion."""
    img: dict[int, int] = {}
    for l, m in mapping.items():
        for src, dst in ((l, m), (-l, -m)):
            if img.get(src, dst) != dst:
                raise WhiteheadError("permutation does not commute with inversion")
            img[src] = dst
    perm = tuple(img.get(i + 1, i + 1) for i in range(g.n))
    if sorted(abs(m) for m in perm) != list(range(1, g.n + 1)):
        raise WhiteheadError("not a permutation of the letters")
    for i in range(g.n):
        for j in range(g.n):
            if i != j:
                a = bool(g.adj[i] >> j & 1)
                b = bool(g.adj[abs(perm[i]) - 1] >> (abs(perm[j]) - 1) & 1)
                if a != b:
                    raise WhiteheadError("permutation does not induce a graph automorphism")
    return WhiteheadAuto(g, perm=perm)


@dataclass(frozen=True)
class Type2Parts:
    conj: tuple[str, ...]
    trans: tuple[int, ...]
    fixed: tuple[str, ...]


def make_type2(g: CommutationGraph, A: Iterable[int], a: int) -> WhiteheadAuto:
    A = frozenset(A)
    for l in A | {a}:
        if not l or abs(l) > g.n:
            raise WhiteheadError(f"unknown letter {l}")
    if a not in A:
        raise WhiteheadError("multiplier not in A")
    if -a in A:
        raise WhiteheadError("inverse of the multiplier lies in A")
    av = abs(a) - 1
    rest = A - {a}
    both = 0
    trans = []
    for l in rest:
        v = abs(l) - 1
        if -l in rest:
            both |= 1 << v
        else:
            trans.append(l)
    fixed = both & g.adj[av]
    conj = both & ~fixed
    outside = g.full & ~g.st[av]
    covered = 0
    for comp in g.components_mask(outside):
        if comp & conj:
            if comp & ~conj:
                raise WhiteheadError("conjugated set is not a union of components of the graph minus st(a)")
            covered |= comp
    if covered != conj:
        raise WhiteheadError("conjugated set is not a union of components of the graph minus st(a)")
    for t in trans:
        if g.adj[abs(t) - 1] & ~g.st[av]:
            raise WhiteheadError(f"transvection {letter_name(g, t)} -> {letter_name(g, t)}{letter_name(g, a)} does not exist")
    if not conj and not trans:
        raise WhiteheadError("Whitehead automorphism moves nothing")
    parts = Type2Parts(g.names(conj), tuple(sorted(trans, key=letter_key)), g.names(fixed))
    return WhiteheadAuto(g, A=A, a=a, parts=parts)


def try_type2(g: CommutationGraph, A: Iterable[int], a: int) -> WhiteheadAuto | None:
    try:
        return make_type2(g, A, a)
    except WhiteheadError:
        return None


def transvection(g: CommutationGraph, t: int, a: int) -> WhiteheadAuto:
    return make_type2(g, {t, a}, a)


def conjugation(g: CommutationGraph, b: int) -> WhiteheadAuto:
    """Inner automorphism by ``b`` as the Whitehead automorphism (L - b^-1, b)."""
    letters = {l for i in range(g.n) for l in (i + 1, -(i + 1))}
    return make_type2(g, letters - {-b}, b)


def sigma(g: CommutationGraph, a: int, b: int) -> WhiteheadAuto:
    """Type 1 map with cycle (a, b^-1, a^-1, b)."""
    return make_type1(g, {a: -b, b: a})


def split_long_short(phi: WhiteheadAuto) -> tuple[WhiteheadAuto, WhiteheadAuto]:
    g = phi.graph
    if phi.is_type1:
        raise WhiteheadError("split is defined for Type 2 only")
    st = g.st[abs(phi.a) - 1]
    short_set = frozenset(l for l in phi.A if st >> (abs(l) - 1) & 1)
    long_set = phi.A - short_set
    short = try_type2(g, short_set, phi.a) or identity(g)
    lng = make_type2(g, long_set | {phi.a}, phi.a) if long_set else identity(g)
    return short, lng


# -- families --

def all_letters(g: CommutationGraph, mask: int | None = None) -> list[int]:
    mask = g.full if mask is None else mask
    return [s * (i + 1) for i in range(g.n) if mask >> i & 1 for s in (1, -1)]


def _dedupe(members: Iterable[WhiteheadAuto]) -> list[WhiteheadAuto]:
    seen = {}
    for m in sorted(members, key=lambda m: m.key):
        if m.is_identity:
            continue
        seen.setdefault(m.endo.images, m)
    return sorted(seen.values(), key=lambda m: m.key)


def graph_automorphisms(g: CommutationGraph) -> list[tuple[int, ...]]:
    """Vertex permutations preserving adjacency (backtracking)."""
    out = []
    n = g.n
    deg = [bin(a).count("1") for a in g.adj]

    def extend(img: list[int], used: int):
        i = len(img)
        if i == n:
            out.append(tuple(img))
            return
        for j in range(n):
            if used >> j & 1 or deg[j] != deg[i]:
                continue
            if all((g.adj[i] >> k & 1) == (g.adj[j] >> img[k] & 1) for k in range(i)):
                img.append(j)
                extend(img, used | 1 << j)
                img.pop()

    extend([], 0)
    return out


def type1_all(g: CommutationGraph) -> list[WhiteheadAuto]:
    out = []
    for p in graph_automorphisms(g):
        for signs in itertools.product((1, -1), repeat=g.n):
            out.append(WhiteheadAuto(g, perm=tuple(s * (p[i] + 1) for i, s in enumerate(signs))))
    return out


def enumerate_family(g: CommutationGraph, kind: str, x: str | None = None) -> list[WhiteheadAuto]:
    """Members of Inv, Tr, LInn, Omega_s, Omega_l or Omega_x, deduplicated by action."""
    kind = kind.lower()
    if kind == "inv":
        return [inversion(g, v) for v in g.vertices]
    if kind == "tr":
        out = []
        for t in all_letters(g):
            for a in all_letters(g):
                if abs(t) != abs(a):
                    m = try_type2(g, {t, a}, a)
                    if m is not None:
                        out.append(m)
        return _dedupe(out)
    if kind == "linn":
        out = []
        for a in all_letters(g):
            av = abs(a) - 1
            for comp in g.components_mask(g.full & ~g.st[av]):
                out.append(make_type2(g, set(all_letters(g, comp)) | {a}, a))
        return sorted(out, key=lambda m: m.key)
    if kind == "omega_s":
        out = []
        for a in all_letters(g):
            pool = all_letters(g, g.adj[abs(a) - 1])
            out.extend(_subsets_type2(g, pool, a))
        return _dedupe(out)
    if kind == "omega_l":
        out = type1_all(g)
        for a in all_letters(g):
            pool = all_letters(g, g.full & ~g.st[abs(a) - 1])
            out.extend(_subsets_type2(g, pool, a))
        return _dedupe(out)
    if kind in ("omega_x", "omega"):
        if x is None:
            raise WhiteheadError("Omega_x needs a vertex")
        return omega_x(g, x)
    raise WhiteheadError(f"unknown family {kind!r}")


def _subsets_type2(g: CommutationGraph, pool: Sequence[int], a: int) -> list[WhiteheadAuto]:
    out = []
    verts = sorted({abs(l) for l in pool})
    # each vertex contributes nothing, x, x^-1 or both
    for choice in itertools.product(range(4), repeat=len(verts)):
        A = {a}
        for v, c in zip(verts, choice):
            if c & 1:
                A.add(v)
            if c & 2:
                A.add(-v)
        if len(A) > 1:
            m = try_type2(g, A, a)
            if m is not None:
                out.append(m)
    return out


def omega_x(g: CommutationGraph, x: str) -> list[WhiteheadAuto]:
    info = class_partition(g, x)
    if info.abelian:
        raise WhiteheadError(f"class of {x} is in the abelian case; Omega_x is defined for the free case")
    cls = [g.vid(v) for v in info.members]
    out = []
    # Type 1: signed permutations of the class letters
    for p in itertools.permutations(cls):
        for signs in itertools.product((1, -1), repeat=len(cls)):
            perm = list(range(1, g.n + 1))
            for src, dst, s in zip(cls, p, signs):
                perm[src] = s * (dst + 1)
            out.append(WhiteheadAuto(g, perm=tuple(perm)))
    cls_letters = all_letters(g, g.mask(info.members))
    mults = cls_letters + all_letters(g, g.mask(info.outer))
    for a in mults:
        pool = [l for l in cls_letters if abs(l) != abs(a)]
        out.extend(_subsets_type2(g, pool, a))
    return _dedupe(out)


# -- text syntax --

_WH_RE = re.compile(r"^\s*wh\s*\{([^}]*)\}\s*(\S+)\s*$")


def parse_auto(g: CommutationGraph, text: str) -> WhiteheadAuto:
    """Parse ``inv x``, ``tau x y``, ``conj x``, ``wh {i, i^-1, c} c`` or ``perm (a b)(a^-1 b^-1)``."""
    s = text.strip()
    try:
        m = _WH_RE.match(s)
        if m:
            letters = {parse_letter(g, t) for t in m.group(1).replace(",", " ").split()}
            return make_type2(g, letters, parse_letter(g, m.group(2)))
        head, _, rest = s.partition(" ")
        args = rest.split()
        if head == "inv" and len(args) == 1:
            return inversion(g, args[0])
        if head == "tau" and len(args) == 2:
            return transvection(g, parse_letter(g, args[0]), parse_letter(g, args[1]))
        if head == "conj" and len(args) == 1:
            return conjugation(g, parse_letter(g, args[0]))
        if head == "perm":
            mapping = {}
            for cyc in re.findall(r"\(([^)]*)\)", rest):
                ls = [parse_letter(g, t) for t in cyc.replace(",", " ").split()]
                for u, v in zip(ls, ls[1:] + ls[:1]):
                    if mapping.get(u, v) != v:
                        raise WhiteheadError("letter appears twice in cycles")
                    mapping[u] = v
            return make_type1(g, mapping)
        if head == "id" and not args:
            return identity(g)
    except GraphError as e:
        raise WhiteheadError(str(e)) from None
    raise WhiteheadError(f"cannot parse automorphism {text!r}")


Factor = tuple[WhiteheadAuto, int]


def as_factors(fs: Iterable) -> list[Factor]:
    return [f if isinstance(f, tuple) else (f, 1) for f in fs]


def compose_to_map(g: CommutationGraph, fs: Iterable) -> EndoMap:
    """Action of a product of Whitehead automorphisms (leftmost applied first)."""
    out = EndoMap.identity(g)
    for auto, e in as_factors(fs):
        out = out.then(auto.endo if e > 0 else auto.endo.inverse())
    return out
