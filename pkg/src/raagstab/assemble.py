"""A finite presentation of the whole stabiliser, assembled level by level.

Each class contributes a presentation of its vertex factor.  Classes on
one level commute.  Every generator of a lower level acts on every
generator of a higher level by conjugation; the conjugate is evaluated
and re-factored over the higher level's generators.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .config import RunConfig
from .endomap import EndoMap
from .graph import AdmissibleLattice, CommutationGraph, build_lattice, class_partition
from .matrix import gl_presentation, gl_word
from .presentation import Generator, Presentation, Relator, SymWord, invert
from .relations import build_Rx, tietze_reduce
from .stabilizer import (MembershipError, class_restriction, express_in_omega_x,
                         free_case_split, matrix_coordinates, matrix_split, short_exponents,
                         to_matrix)
from .whitehead import WhiteheadAuto, inversion, sigma, transvection


class AssemblyError(RuntimeError):
    """An action relator could not be re-factored."""


def _letter(g: CommutationGraph, v: str) -> int:
    return g.vid(v) + 1


@dataclass
class ClassBlock:
    """Generators and relators of one vertex factor, with a factoriser for its elements."""

    rep: str
    level: int
    kind: str
    shape: dict
    generators: list[Generator]
    relators: list[Relator]
    sym_of: dict = field(default_factory=dict)
    factoriser: "_FreeFactoriser | None" = None
    perm_subst: dict = field(default_factory=dict)
    depth: int = 8

    def __post_init__(self):
        self.sym_of = {gen.auto: gen.symbol for gen in self.generators}


def _power(sym: str, e: int) -> SymWord:
    return ((sym, 1 if e > 0 else -1),) * abs(e)


# -- abelian classes --

def _abelian_block(g: CommutationGraph, rep: str, level: int, depth: int) -> ClassBlock:
    coords, s = matrix_coordinates(g, rep)
    cls, short = coords[:s], coords[s:]
    lets = [_letter(g, v) for v in coords]
    gl_gens = {}
    for i in range(s):
        gl_gens[("O", i)] = inversion(g, cls[i])
    for i, j in itertools.permutations(range(s), 2):
        gl_gens[("E", i, j)] = transvection(g, lets[i], lets[j])
    u_gens = [transvection(g, lets[i], lets[s + k]) for i in range(s) for k in range(len(short))]
    gens = [Generator(a.symbol(rep), a) for a in gl_gens.values()]
    gens += [Generator(a.symbol(rep), a) for a in u_gens]
    sym = {a: gen.symbol for gen, a in zip(gens, list(gl_gens.values()) + u_gens)}
    rels = []
    for word, tag in gl_presentation(s):
        rels.append(Relator(tuple((sym[gl_gens[gen]], e) for gen, e in word), tag))
    usyms = [sym[a] for a in u_gens]
    rels += [Relator(((a, 1), (b, 1), (a, -1), (b, -1)), "U:commute") for a, b in itertools.combinations(usyms, 2)]
    block = ClassBlock(rep, level, "abelian", {"s": s, "r": len(coords)}, gens, rels, depth=depth)
    for h in gl_gens.values():
        for u in u_gens:
            conj = h.endo.inverse().then(u.endo).then(h.endo)
            word = _abelian_word(g, block, conj)
            rels.append(Relator(((sym[h], -1), (sym[u], 1), (sym[h], 1)) + invert(word), "U:action",
                                {"by": h.text(), "on": u.text()}))
    return block


def _abelian_word(g: CommutationGraph, block: ClassBlock, phi: EndoMap) -> SymWord:
    coords, s = matrix_coordinates(g, block.rep)
    lets = [_letter(g, v) for v in coords]
    m = to_matrix(g, block.rep, phi)
    md, mu = matrix_split(m, s)
    out: list[tuple[str, int]] = []
    for gen, e in gl_word(tuple(row[:s] for row in md[:s])):
        if gen[0] == "O":
            a = inversion(g, coords[gen[1]])
        else:
            a = transvection(g, lets[gen[1]], lets[gen[2]])
        out.extend(_power(block.sym_of[a], e))
    for i in range(s):
        for k in range(s, len(coords)):
            out.extend(_power(block.sym_of[transvection(g, lets[i], lets[k])], mu[i][k]))
    return tuple(out)


# -- free classes --

def _perm_words(g: CommutationGraph, cls: list[int], target: WhiteheadAuto) -> list[WhiteheadAuto]:
    """A shortest word in class inversions and the maps sigma_{a,b} equal to a class permutation."""
    moves = [inversion(g, g.vertices[v - 1]) for v in cls]
    moves += [sigma(g, a, b) for a, b in itertools.permutations(cls, 2)]
    start = EndoMap.identity(g).images
    seen = {start: []}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == target.endo.images:
            return seen[cur]
        for m in moves:
            nxt = tuple(m.apply(w) for w in cur)
            if nxt not in seen:
                seen[nxt] = seen[cur] + [m]
                queue.append(nxt)
    raise AssemblyError(f"{target.text()} is not a class permutation")


def _sigma_as_transvections(g: CommutationGraph, s: WhiteheadAuto) -> list[tuple[WhiteheadAuto, int]]:
    """sigma_{a,b} = (A,a)(A-a+a^-1,b)(A-b+b^-1,a)^-1 with A = {a,b}."""
    (a, img_a), = [(i + 1, m) for i, m in enumerate(s.perm) if abs(m) != i + 1 and m < 0][:1]
    b = -img_a
    word = [(transvection(g, b, a), 1), (transvection(g, -a, b), 1), (transvection(g, -b, a), -1)]
    return word


class _FreeFactoriser:
    def __init__(self, g: CommutationGraph, rep: str, reduced: Presentation):
        self.g = g
        self.rep = rep
        self.sym_of = {gen.auto: gen.symbol for gen in reduced.generators}
        self.perm_subst: dict[str, SymWord] = {}

    def auto_word(self, m: WhiteheadAuto, e: int = 1) -> SymWord:
        if m.is_type1:
            s = self.sym_of.get(m)
            if s is not None:
                return ((s, e),)
            return ((self.sym_of[m.inverse()], -e),)
        word = tuple((self.sym_of[transvection(self.g, l, abs(m.a))], 1 if m.a > 0 else -1)
                     for l in sorted(m.A - {m.a}, key=lambda l: (abs(l), l < 0)))
        return word if e > 0 else invert(word)


def _free_block(g: CommutationGraph, rep: str, level: int, keep_perms: bool, depth: int) -> ClassBlock:
    info = class_partition(g, rep)
    reduced = tietze_reduce(build_Rx(g, rep))
    fac = _FreeFactoriser(g, rep, reduced)
    gens = list(reduced.generators)
    rels = list(reduced.relators)
    if not keep_perms:
        gens, rels = _eliminate_perms(g, info, gens, rels, fac)
    cls = [_letter(g, v) for v in info.members]
    short = [_letter(g, v) for v in info.short]
    s_gens = [transvection(g, x, z) for x in cls for z in short]
    for a in s_gens:
        gens.append(Generator(a.symbol(rep), a))
    block = ClassBlock(rep, level, "free", {"p": info.p, "q": info.p + len(info.short)}, gens, rels,
                       factoriser=fac, perm_subst=fac.perm_subst, depth=depth)
    ssyms = [block.sym_of[a] for a in s_gens]
    rels += [Relator(((a, 1), (b, 1), (a, -1), (b, -1)), "short:commute") for a, b in itertools.combinations(ssyms, 2)]
    for gen in reduced.generators if keep_perms else [x for x in gens if x.auto not in s_gens]:
        for u in s_gens:
            h = gen.auto
            conj = h.endo.inverse().then(u.endo).then(h.endo)
            word = _free_word(g, block, conj)
            rels.append(Relator(((gen.symbol, -1), (block.sym_of[u], 1), (gen.symbol, 1)) + invert(word),
                                "short:action", {"by": h.text(), "on": u.text()}))
    return block


def _eliminate_perms(g, info, gens, rels, fac):
    cls = [_letter(g, v) for v in info.members]
    subst: dict[str, SymWord] = {}
    for gen in gens:
        if not gen.auto.is_type1 or gen.auto.inversion_of() is not None:
            continue
        word: list[tuple[str, int]] = []
        for m in _perm_words(g, cls, gen.auto):
            if m.inversion_of() is not None:
                word.extend(fac.auto_word(m))
            else:
                for t, e in _sigma_as_transvections(g, m):
                    word.extend(fac.auto_word(t, e))
        subst[gen.symbol] = tuple(word)
    fac.perm_subst = subst

    def rewrite(w):
        out = []
        for s, e in w:
            out.extend((subst[s] if e > 0 else invert(subst[s])) if s in subst else ((s, e),))
        return tuple(out)

    new_rels = [Relator(rewrite(r.word), r.rule, r.params) for r in rels]
    new_rels = [r for r in new_rels if r.word]
    return [x for x in gens if x.symbol not in subst], new_rels


def _free_word(g: CommutationGraph, block: ClassBlock, phi: EndoMap) -> SymWord:
    phi_l, phi_s = free_case_split(g, block.rep, phi)
    out: list[tuple[str, int]] = []
    for (v, z), e in short_exponents(g, block.rep, phi_s).items():
        out.extend(_power(block.sym_of[transvection(g, _letter(g, v), _letter(g, z))], e))
    fac = block.factoriser
    for m in express_in_omega_x(g, block.rep, phi_l, depth=block.depth):
        for s, e in fac.auto_word(m):
            if s in block.perm_subst:
                out.extend(block.perm_subst[s] if e > 0 else invert(block.perm_subst[s]))
            else:
                out.append((s, e))
    return tuple(out)


def class_word(g: CommutationGraph, block: ClassBlock, phi: EndoMap) -> SymWord:
    if phi.is_identity:
        return ()
    if block.kind == "abelian":
        return _abelian_word(g, block, phi)
    return _free_word(g, block, phi)


# -- the whole group --

def class_blocks(g: CommutationGraph, config: RunConfig | None = None,
                 lattice: AdmissibleLattice | None = None) -> list[ClassBlock]:
    config = config or RunConfig()
    lat = lattice or build_lattice(g, config.transversal)
    blocks = []
    for k in range(lat.height_max + 1):
        for y in lat.reps(k):
            info = class_partition(g, y)
            if info.abelian:
                b = _abelian_block(g, y, k, config.depth)
            else:
                b = _free_block(g, y, k, config.keep_perms, config.depth)
            blocks.append(b)
    return blocks


def level_word(g: CommutationGraph, lat: AdmissibleLattice, blocks: list[ClassBlock],
               k: int, phi: EndoMap) -> SymWord:
    """Factor a level-k vertex automorphism over the generators of the level's classes."""
    out: list[tuple[str, int]] = []
    rebuilt = EndoMap.identity(g)
    for b in blocks:
        if b.level != k:
            continue
        piece = class_restriction(g, phi, b.rep, lat)
        rebuilt = rebuilt.then(piece)
        out.extend(class_word(g, b, piece))
    if rebuilt != phi:
        raise MembershipError(f"map is not a product of level {k} class factors")
    return tuple(out)


def emit_presentation(g: CommutationGraph, config: RunConfig | None = None) -> Presentation:
    """Presentation of the stabiliser on inversions and transvections (and class permutations)."""
    config = config or RunConfig()
    lat = build_lattice(g, config.transversal)
    blocks = class_blocks(g, config, lat)
    gens: list[Generator] = []
    rels: list[Relator] = []
    for b in blocks:
        gens.extend(b.generators)
        rels.extend(Relator(r.word, r.rule, {"class": b.rep, **r.params}) for r in b.relators)
    for k in range(lat.height_max + 1):
        level = [b for b in blocks if b.level == k]
        for b, c in itertools.combinations(level, 2):
            for s, t in itertools.product(b.generators, c.generators):
                rels.append(Relator(((s.symbol, 1), (t.symbol, 1), (s.symbol, -1), (t.symbol, -1)),
                                    "level:commute", {"classes": [b.rep, c.rep]}))
    for upper in blocks:
        for lower in blocks:
            if lower.level >= upper.level:
                continue
            for u, h in itertools.product(upper.generators, lower.generators):
                conj = h.auto.endo.inverse().then(u.auto.endo).then(h.auto.endo)
                try:
                    word = level_word(g, lat, blocks, upper.level, conj)
                except (MembershipError, RuntimeError) as e:
                    raise AssemblyError(f"cannot factor {h.symbol}^-1 {u.symbol} {h.symbol}: {e}") from e
                rels.append(Relator(((h.symbol, -1), (u.symbol, 1), (h.symbol, 1)) + invert(word),
                                    "level:action", {"by": h.symbol, "on": u.symbol}))
    meta = {
        "levels": [
            {"level": k, "classes": [{"rep": b.rep, "kind": b.kind, **b.shape,
                                      "members": list(class_partition(g, b.rep).members)}
                                     for b in blocks if b.level == k]}
            for k in range(lat.height_max + 1)
        ],
        "keep_perms": config.keep_perms,
    }
    pres = Presentation(g, gens, rels, meta)
    pres.verify()
    return pres
