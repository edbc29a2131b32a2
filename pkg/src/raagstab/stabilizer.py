"""The stabiliser of the admissible subgroups and its decomposition.

Covers membership, the level and class restriction maps, the tower
factorisation into class factors, the integer matrix model of abelian
classes, the short/long split of free classes and factorisation of free
class elements over the Whitehead generators of the class.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .endomap import EndoMap
from .graph import AdmissibleLattice, ClassInfo, CommutationGraph, build_lattice, class_partition
from .matrix import IntMatrix, determinant, identity_matrix, mat_inverse, mat_mul
from .whitehead import WhiteheadAuto, enumerate_family, make_type1, omega_x
from .words import Word, inverse as word_inverse, normal_form, support_mask


class MembershipError(ValueError):
    """Input is not in the required stabiliser subgroup."""


class SearchBoundError(RuntimeError):
    """A bounded search gave up."""


@lru_cache(maxsize=None)
def lattice_of(g: CommutationGraph) -> AdmissibleLattice:
    return build_lattice(g)


@lru_cache(maxsize=None)
def omega_cached(g: CommutationGraph, x: str) -> tuple[WhiteheadAuto, ...]:
    return tuple(omega_x(g, x))


@lru_cache(maxsize=None)
def inv_tr(g: CommutationGraph) -> tuple[WhiteheadAuto, ...]:
    return tuple(enumerate_family(g, "inv") + enumerate_family(g, "tr"))


# -- membership --

def supports_admissible(g: CommutationGraph, images) -> bool:
    adm = g.admissible_masks
    return all(support_mask(w) & ~adm[i] == 0 for i, w in enumerate(images))


def _total(images) -> int:
    return sum(len(w) for w in images)


@lru_cache(maxsize=None)
def _transvections(g: CommutationGraph) -> tuple[tuple[int, EndoMap], ...]:
    return tuple((abs(t.transvection_of()[0]) - 1, t.endo) for t in enumerate_family(g, "tr"))


def _apply_images(images, w) -> Word:
    out = []
    for l in w:
        out.extend(images[l - 1] if l > 0 else word_inverse(images[-l - 1]))
    return out


def find_inverse(g: CommutationGraph, phi: EndoMap, depth: int = 8) -> EndoMap | None:
    """Inverse by descent: precompose with transvections to shorten the images.

    ``t phi`` has images ``(x t) phi``; once every image is a letter the map
    is a signed letter permutation.  Plateaus are searched breadth-first up
    to ``depth`` moves.
    """
    moves = _transvections(g)
    cur = list(phi.images)
    pre: list[EndoMap] = []
    while _total(cur) > g.n:
        base = _total(cur)
        best = None
        for mv in moves:
            v = mv[0]
            new = normal_form(g, _apply_images(cur, mv[1].images[v]))
            tot = base - len(cur[v]) + len(new)
            if best is None or tot < best[0]:
                best = (tot, mv, v, new)
        if best[0] < base:
            cur[best[2]] = best[3]
            pre.append(best[1][1])
            continue
        path = _plateau(g, cur, moves, depth)
        if path is None:
            return None
        for mv in path:
            cur[mv[0]] = normal_form(g, _apply_images(cur, mv[1].images[mv[0]]))
            pre.append(mv[1])
    letters = [w[0] for w in cur]
    if sorted(abs(l) for l in letters) != list(range(1, g.n + 1)):
        return None
    try:
        perm = make_type1(g, {i + 1: l for i, l in enumerate(letters)}).endo
    except ValueError:
        return None
    # cur = t_k ... t_1 phi, so phi^-1 = cur^-1 t_k ... t_1
    inv = perm.inverse()
    for t in reversed(pre):
        inv = inv.then(t)
    return EndoMap.trusted(g, inv.images, phi.images)


def _plateau(g, cur, moves, depth):
    start = _total(cur)
    seen = {tuple(cur)}
    queue = deque([(tuple(cur), [])])
    while queue:
        state, path = queue.popleft()
        if len(path) >= depth:
            continue
        for mv in moves:
            v = mv[0]
            new = normal_form(g, _apply_images(state, mv[1].images[v]))
            tot = start - len(state[v]) + len(new)
            nxt = state[:v] + (new,) + state[v + 1:]
            if tot < start:
                return path + [mv]
            if tot == start and nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, path + [mv]))
    return None


def is_in_stK(g: CommutationGraph, phi: EndoMap, depth: int = 8) -> bool:
    """Membership in the stabiliser of every admissible subgroup."""
    if not phi.is_homomorphism():
        raise MembershipError("images do not respect the commutation relations")
    if not supports_admissible(g, phi.images):
        return False
    inv = phi.inverse() if phi.inverse_images is not None else find_inverse(g, phi, depth)
    if inv is None:
        raise SearchBoundError("no inverse found within the search bound")
    if not phi.then(inv).is_identity or not inv.then(phi).is_identity:
        return False
    return supports_admissible(g, inv.images)


# -- restriction maps --

def _restrict(g: CommutationGraph, phi: EndoMap, mask: int) -> EndoMap:
    imgs = [phi.images[i] if mask >> i & 1 else (i + 1,) for i in range(g.n)]
    inv = None
    if phi.inverse_images is not None:
        inv = [phi.inverse_images[i] if mask >> i & 1 else (i + 1,) for i in range(g.n)]
    return EndoMap(g, imgs, inv)


def level_restriction(g: CommutationGraph, phi: EndoMap, k: int,
                      lattice: AdmissibleLattice | None = None) -> EndoMap:
    lat = lattice or lattice_of(g)
    if not 0 <= k <= lat.height_max:
        raise ValueError(f"level {k} out of range 0..{lat.height_max}")
    return _restrict(g, phi, g.mask(lat.union(k)))


def class_restriction(g: CommutationGraph, phi: EndoMap, y: str,
                      lattice: AdmissibleLattice | None = None) -> EndoMap:
    lat = lattice or lattice_of(g)
    level = g.mask(lat.level(lat.height(y)))
    for i in range(g.n):
        if not level >> i & 1 and phi.images[i] != (i + 1,):
            raise MembershipError(f"map moves {g.vertices[i]}, which is outside level {lat.height(y)}")
    return _restrict(g, phi, g.mask(class_partition(g, y).members))


@dataclass
class TowerFactorization:
    """Level factors from the top level down, each split into class factors."""

    graph: CommutationGraph
    per_level: list[tuple[int, list[tuple[str, EndoMap]]]]
    residual: EndoMap

    def level_map(self, k: int) -> EndoMap:
        out = EndoMap.identity(self.graph)
        for level, factors in self.per_level:
            if level == k:
                for _, m in factors:
                    out = out.then(m)
        return out

    def recompose(self) -> EndoMap:
        out = EndoMap.identity(self.graph)
        for _, factors in self.per_level:
            for _, m in factors:
                out = out.then(m)
        return out.then(self.residual)

    def nontrivial(self) -> list[tuple[int, str, EndoMap]]:
        return [(k, y, m) for k, fs in self.per_level for y, m in fs if not m.is_identity]


def tower_factorize(g: CommutationGraph, phi: EndoMap, lattice: AdmissibleLattice | None = None,
                    check: bool = True) -> TowerFactorization:
    lat = lattice or lattice_of(g)
    if phi.inverse_images is None:
        inv = find_inverse(g, phi)
        if inv is None:
            raise SearchBoundError("no inverse found within the search bound")
        phi = EndoMap(g, phi.images, inv.images)
    if check and not is_in_stK(g, phi):
        raise MembershipError("automorphism is not in the stabiliser")
    restr = {k: level_restriction(g, phi, k, lat) for k in range(lat.height_max + 1)}
    restr[-1] = EndoMap.identity(g)
    per_level = []
    done = EndoMap.identity(g)
    for k in range(lat.height_max, -1, -1):
        theta = restr[k].then(restr[k - 1].inverse())
        factors = [(y, class_restriction(g, theta, y, lat)) for y in lat.reps(k)]
        per_level.append((k, factors))
        for _, m in factors:
            done = done.then(m)
    residual = done.inverse().then(phi)
    return TowerFactorization(g, per_level, residual)


# -- abelian classes: the matrix model --

def class_info(g: CommutationGraph, x: str) -> ClassInfo:
    return class_partition(g, x)


def matrix_coordinates(g: CommutationGraph, x: str) -> tuple[tuple[str, ...], int]:
    """Coordinate order (class first, then the rest of the admissible set) and class size."""
    info = class_partition(g, x)
    if not info.abelian:
        raise MembershipError(f"class of {x} is in the free case")
    return info.members + info.short, info.p


def _check_class_supported(g: CommutationGraph, x: str, phi: EndoMap) -> ClassInfo:
    info = class_partition(g, x)
    cls = g.mask(info.members)
    adm = g.admissible_masks[g.vid(x)]
    for i in range(g.n):
        if cls >> i & 1:
            if support_mask(phi.images[i]) & ~adm:
                raise MembershipError(f"image of {g.vertices[i]} leaves the admissible set")
        elif phi.images[i] != (i + 1,):
            raise MembershipError(f"map moves {g.vertices[i]}, which is outside the class of {x}")
    return info


def to_matrix(g: CommutationGraph, x: str, phi: EndoMap) -> IntMatrix:
    coords, s = matrix_coordinates(g, x)
    _check_class_supported(g, x, phi)
    pos = {g.vid(v) + 1: k for k, v in enumerate(coords)}
    rows = []
    for k, v in enumerate(coords):
        row = [0] * len(coords)
        for l in phi.images[g.vid(v)]:
            row[pos[abs(l)]] += 1 if l > 0 else -1
        rows.append(tuple(row))
    m = tuple(rows)
    validate_s_matrix(m, s)
    return m


def validate_s_matrix(m: IntMatrix, s: int) -> None:
    r = len(m)
    for i in range(s, r):
        for j in range(r):
            if m[i][j] != int(i == j):
                raise ValueError("rows below the class block must be identity rows")
    if determinant(tuple(row[:s] for row in m[:s])) not in (1, -1):
        raise ValueError("class block is not invertible over the integers")


def from_matrix(g: CommutationGraph, x: str, m: IntMatrix) -> EndoMap:
    coords, s = matrix_coordinates(g, x)
    validate_s_matrix(m, s)
    letters = [g.vid(v) + 1 for v in coords]

    def images(mat):
        imgs = [(i + 1,) for i in range(g.n)]
        for k in range(s):
            w = []
            for j, e in enumerate(mat[k]):
                w.extend([letters[j] if e > 0 else -letters[j]] * abs(e))
            imgs[letters[k] - 1] = tuple(w)
        return imgs

    return EndoMap(g, images(m), images(mat_inverse(m)))


def matrix_split(m: IntMatrix, s: int) -> tuple[IntMatrix, IntMatrix]:
    """``m = m_D m_U`` with ``m_D`` block diagonal and ``m_U`` unipotent."""
    validate_s_matrix(m, s)
    r = len(m)
    a1 = tuple(row[:s] for row in m[:s])
    b = tuple(row[s:] for row in m[:s])
    bu = mat_mul(mat_inverse(a1), b) if r > s else ()
    ident = identity_matrix(r)
    md = tuple(tuple(a1[i][j] if i < s and j < s else ident[i][j] for j in range(r)) for i in range(r))
    mu = tuple(tuple(bu[i][j - s] if i < s and j >= s else ident[i][j] for j in range(r)) for i in range(r))
    return md, mu


# -- free classes: short/long split and Whitehead factorisation --

def free_case_split(g: CommutationGraph, x: str, phi: EndoMap) -> tuple[EndoMap, EndoMap]:
    """``(phi_l, phi_s)`` with ``phi = phi_s phi_l``; ``phi_s`` collects the central exponents."""
    info = _check_class_supported(g, x, phi)
    if info.abelian:
        raise MembershipError(f"class of {x} is in the abelian case")
    short = [g.vid(v) + 1 for v in info.short]
    imgs = [(i + 1,) for i in range(g.n)]
    inv = [(i + 1,) for i in range(g.n)]
    for v in info.members:
        i = g.vid(v)
        w = phi.images[i]
        expo = {z: 0 for z in short}
        for l in w:
            if abs(l) in expo:
                expo[abs(l)] += 1 if l > 0 else -1
        tail = [z if e > 0 else -z for z in short for e in [expo[z]] for _ in range(abs(e))]
        imgs[i] = (i + 1,) + tuple(tail)
        inv[i] = (i + 1,) + word_inverse(tail)
    phi_s = EndoMap(g, imgs, inv)
    phi_l = phi_s.inverse().then(phi)
    return phi_l, phi_s


def short_exponents(g: CommutationGraph, x: str, phi: EndoMap) -> dict[tuple[str, str], int]:
    """Exponent of each short letter in each class image (the central part)."""
    info = class_partition(g, x)
    out = {}
    for v in info.members:
        w = phi.images[g.vid(v)]
        for z in info.short:
            zi = g.vid(z) + 1
            out[(v, z)] = sum(1 if l == zi else -1 if l == -zi else 0 for l in w)
    return out


def express_in_omega_x(g: CommutationGraph, x: str, phi: EndoMap, depth: int = 8) -> list[WhiteheadAuto]:
    """Factorisation over the Whitehead generators of the class, by greedy descent.

    Post-composing with ``w`` in Omega_x replaces the class images by their
    images under ``w``; the total length is driven down to the class size.
    """
    info = class_partition(g, x)
    members = [g.vid(v) for v in info.members]
    _check_class_supported(g, x, phi)
    if info.abelian:
        raise MembershipError(f"class of {x} is in the abelian case")
    if any(support_mask(phi.images[i]) & g.mask(info.short) for i in members):
        raise MembershipError("map has a short-range part; split it off first")
    omega = omega_cached(g, x)
    cur = tuple(phi.images[i] for i in members)
    applied: list[WhiteheadAuto] = []
    target = len(members)
    while _total(cur) > target:
        best = None
        for w in omega:
            nxt = tuple(w.apply(u) for u in cur)
            tot = _total(nxt)
            if best is None or tot < best[0]:
                best = (tot, w, nxt)
        if best[0] < _total(cur):
            applied.append(best[1])
            cur = best[2]
            continue
        path = _omega_plateau(cur, omega, depth)
        if path is None:
            raise SearchBoundError(f"no shortening Whitehead sequence within depth {depth}")
        for w in path:
            cur = tuple(w.apply(u) for u in cur)
            applied.append(w)
    mapping = {}
    for i, w in zip(members, cur):
        if len(w) != 1:
            raise SearchBoundError("descent ended away from a letter permutation")
        mapping[i + 1] = w[0]
    sigma = make_type1(g, mapping)
    # phi w_1 ... w_k = sigma
    out = [] if sigma.is_identity else [sigma]
    out.extend(w.inverse() for w in reversed(applied))
    return out


def _omega_plateau(cur, omega, depth):
    start = _total(cur)
    seen = {cur}
    queue = deque([(cur, [])])
    while queue:
        state, path = queue.popleft()
        if len(path) >= depth:
            continue
        for w in omega:
            nxt = tuple(w.apply(u) for u in state)
            tot = _total(nxt)
            if tot < start:
                return path + [w]
            if tot == start and nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, path + [w]))
    return None
