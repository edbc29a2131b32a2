"""The relations among the Whitehead generators of a free-case class, and their Tietze reduction."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .graph import CommutationGraph, class_partition
from .presentation import Generator, Presentation, Relator, SymWord, cyclic_free_reduce, invert
from .stabilizer import omega_cached
from .whitehead import WhiteheadAuto, sigma, transvection, try_type2
from .words import normal_form

RULE_ORDER = ("R1", "R2", "R3(a)", "R3(b)", "R3*", "R4", "R4*", "R5", "R6", "R7")


class RelationError(RuntimeError):
    """A relation instance failed to build or to verify."""


@dataclass
class OmegaIndex:
    """Omega_x with symbols and extensional lookup."""

    graph: CommutationGraph
    x: str
    members: tuple[WhiteheadAuto, ...]

    def __post_init__(self):
        self.by_auto = {m: m for m in self.members}
        self.symbol_of = {m: m.symbol(self.x) for m in self.members}
        self.by_pair = {(m.A, m.a): m for m in self.members if not m.is_type1}
        self.by_perm = {m.perm: m for m in self.members if m.is_type1}

    def find_pair(self, A: Iterable[int], a: int) -> WhiteheadAuto | None:
        A = frozenset(A)
        hit = self.by_pair.get((A, a))
        if hit is not None or a not in A or -a in A:
            return hit
        return self.find(try_type2(self.graph, A, a))

    def find(self, auto: WhiteheadAuto | None) -> WhiteheadAuto | None:
        if auto is None:
            return None
        return self.by_auto.get(auto)

    def sym(self, auto: WhiteheadAuto) -> str:
        return self.symbol_of[self.by_auto[auto]]

    @property
    def type1(self) -> list[WhiteheadAuto]:
        return [m for m in self.members if m.is_type1]

    @property
    def type2(self) -> list[WhiteheadAuto]:
        return [m for m in self.members if not m.is_type1]


def omega_index(g: CommutationGraph, x: str) -> OmegaIndex:
    return OmegaIndex(g, x, omega_cached(g, x))


def _perm_image(perm: tuple[int, ...], l: int) -> int:
    m = perm[abs(l) - 1]
    return m if l > 0 else -m


def build_Rx(g: CommutationGraph, x: str, verify: bool = True) -> Presentation:
    """All instances of the nine relation families over Omega_x.

    Each relator is a word over the generator symbols equal to the identity.
    Instances whose target is not a Whitehead automorphism in Omega_x are
    not relations of the family and are skipped.
    """
    info = class_partition(g, x)
    if info.abelian:
        raise RelationError(f"class of {x} is in the abelian case")
    om = omega_index(g, x)
    cls = {l for v in info.members for l in (g.vid(v) + 1, -(g.vid(v) + 1))}
    t2 = om.type2
    t1 = om.type1
    rels: list[Relator] = []

    def add(rule: str, factors: list[tuple[WhiteheadAuto, int]], **params):
        word = tuple((om.sym(a), e) for a, e in factors)
        rels.append(Relator(word, rule, {k: v.text() for k, v in params.items()}))

    member = om.find_pair

    for al in t2:
        inv = member((al.A - {al.a}) | {-al.a}, -al.a)
        if inv is None:
            raise RelationError(f"inverse of {al.text()} is not in Omega_{x}")
        add("R1", [(al, 1), (inv, 1)], alpha=al)

    for al in t2:
        A, a = al.A, al.a
        for be in t2:
            B, b = be.A, be.a
            if al is be:
                continue
            if a == b and A & B == {a}:
                target = member(A | B, a)
                if target is not None:
                    add("R2", [(al, 1), (be, 1), (target, -1)], alpha=al, beta=be)
            if -a not in B and -b not in A and (not A & B or g.adj[abs(a) - 1] >> (abs(b) - 1) & 1):
                add("R3(a)" if not A & B else "R3(b)", [(be, -1), (al, 1), (be, 1), (al, -1)], alpha=al, beta=be)
            if -a in B and b not in A and A <= B:
                add("R3*", [(be, -1), (al, 1), (be, 1), (al, -1)], alpha=al, beta=be)
            if -a not in B and -b in A and not A & B:
                target = member((A | B) - {b}, a)
                if target is not None:
                    add("R4", [(be, -1), (al, 1), (be, 1), (target, -1)], alpha=al, beta=be)
            if -a in B and b in A and A <= B:
                target = member((B - A) | {-b}, -a)
                if target is not None:
                    add("R4*", [(be, -1), (al, 1), (be, 1), (target, -1)], alpha=al, beta=be)

    for al in t2:
        A, a = al.A, al.a
        if a not in cls:
            continue
        for b in sorted(A - {a}):
            if -b in A or abs(b) == abs(a):
                continue
            first = member((A - {a}) | {-a}, b)
            second = member((A - {b}) | {-b}, a)
            sig = om.find(sigma(g, a, b))
            if first is None or second is None or sig is None:
                continue
            add("R5", [(al, 1), (first, 1), (second, -1), (sig, -1)], alpha=al, sigma=sig)

    for s in t1:
        table = {l: s.letter_image(l)[0] for l in cls}
        for al in t2:
            target = member({table.get(l, l) for l in al.A}, table.get(al.a, al.a))
            if target is None:
                raise RelationError(f"{al.text()} conjugated by {s.text()} left Omega_{x}")
            add("R6", [(s, -1), (al, 1), (s, 1), (target, -1)], alpha=al, sigma=s)

    ident = tuple(range(1, g.n + 1))
    for s in t1:
        for t in t1:
            prod = tuple(_perm_image(t.perm, m) for m in s.perm)
            if prod == ident:
                add("R7", [(s, 1), (t, 1)], sigma=s, tau=t)
            else:
                add("R7", [(s, 1), (t, 1), (om.by_perm[prod], -1)], sigma=s, tau=t)

    gens = [Generator(om.symbol_of[m], m) for m in om.members]
    pres = Presentation(g, gens, rels, {"class": x, "stage": "full"})
    if verify:
        bad = fast_failures(pres)
        if bad:
            raise RelationError(f"{len(bad)} relators fail to verify, first {bad[0].rule}: {bad[0].word}")
    return pres


def fast_failures(pres: Presentation) -> list[Relator]:
    """Extensional check on the class generators only; all other generators are fixed by Omega_x."""
    g = pres.graph
    x = pres.meta["class"]
    members = [g.vid(v) for v in class_partition(g, x).members]
    tables = {}
    for gen in pres.generators:
        fwd = {}
        bwd = {}
        e, ei = gen.auto.endo, gen.auto.endo.inverse()
        for i in range(g.n):
            fwd[i + 1] = e.images[i]
            fwd[-(i + 1)] = tuple(-l for l in reversed(e.images[i]))
            bwd[i + 1] = ei.images[i]
            bwd[-(i + 1)] = tuple(-l for l in reversed(ei.images[i]))
        tables[gen.symbol] = (fwd, bwd)
    perms = {gen.symbol: (gen.auto.perm, gen.auto.inverse().perm) for gen in pres.generators
             if gen.auto.is_type1}
    bad = []
    for r in pres.relators:
        if all(s in perms for s, _ in r.word):
            # permutations act letterwise, so compose them on the class letters
            for i in members:
                l = i + 1
                for s, e in r.word:
                    l = _perm_image(perms[s][0 if e > 0 else 1], l)
                if l != i + 1:
                    bad.append(r)
                    break
            continue
        ok = True
        for i in members:
            w = (i + 1,)
            for s, e in r.word:
                t = tables[s][0 if e > 0 else 1]
                w = normal_form(g, [m for l in w for m in t[l]])
            if w != (i + 1,):
                ok = False
                break
        if not ok:
            bad.append(r)
    return bad


# -- Tietze reduction --

def cyclic_key(word: SymWord, order: dict[str, int], involutions: frozenset = frozenset()) -> tuple:
    """Least rotation of the word or its inverse, as a comparable key; positive exponents sort first."""
    best = None
    for w in (word, invert(word)):
        for k in range(max(1, len(w))):
            rot = w[k:] + w[:k]
            key = tuple((order[s], -1 if s in involutions else -e) for s, e in rot)
            if best is None or key < best:
                best = key
    return best


def _from_key(key: tuple, symbols: list[str]) -> SymWord:
    return tuple((symbols[i], -e) for i, e in key)


def _normalize_involutions(word: SymWord, involutions: set[str]) -> SymWord:
    w = tuple((s, 1) if s in involutions else (s, e) for s, e in word)
    changed = True
    while changed:
        changed = False
        out: list[tuple[str, int]] = []
        for s, e in w:
            if out and out[-1] == (s, 1) and e == 1 and s in involutions:
                out.pop()
                changed = True
            else:
                out.append((s, e))
        w = cyclic_free_reduce(out)
        if len(w) >= 2 and w[0] == w[-1] and w[0][0] in involutions:
            w = w[1:-1]
            changed = True
    return w


def _commutator_pair(word: SymWord) -> tuple[str, str] | None:
    if len(word) != 4:
        return None
    (s1, e1), (s2, e2), (s3, e3), (s4, e4) = word
    if s1 == s3 and s2 == s4 and s1 != s2 and e3 == -e1 and e4 == -e2:
        return (s1, s2)
    return None


def _rotate_commutator(word: SymWord) -> tuple[str, str] | None:
    for k in range(len(word)):
        pair = _commutator_pair(word[k:] + word[:k])
        if pair:
            return pair
    return None


def tietze_reduce(pres: Presentation) -> Presentation:
    """Reduce to inversions, positive-multiplier transvections and class permutations.

    Composite generators are replaced by products of transvections with
    the same multiplier (these commute), negative multipliers by inverses,
    and a permutation by the inverse of its inverse when that is another
    generator.  Rewritten relators are cyclically reduced and deduplicated;
    a relator is dropped when it follows from the kept commutators, or
    from the kept single-generator conjugation relators together with them.
    """
    g = pres.graph
    sym_of = {gen.auto: gen.symbol for gen in pres.generators}
    subst: dict[str, SymWord] = {}
    new_gens: dict[str, WhiteheadAuto] = {}
    involutions: set[str] = set()

    def single(l: int, a: int) -> tuple[str, int]:
        pos = transvection(g, l, abs(a))
        s = sym_of.get(pos)
        if s is None:
            raise RelationError(f"transvection {pos.text()} is missing from the generators")
        new_gens[s] = pos
        return (s, 1 if a > 0 else -1)

    for gen in pres.generators:
        m = gen.auto
        if m.is_type1:
            inv = m.inverse()
            if inv == m:
                involutions.add(gen.symbol)
                subst[gen.symbol] = ((gen.symbol, 1),)
                new_gens[gen.symbol] = m
                continue
            other = sym_of.get(inv)
            if other is not None and m.key > inv.key:
                subst[gen.symbol] = ((other, -1),)
            else:
                subst[gen.symbol] = ((gen.symbol, 1),)
                new_gens[gen.symbol] = m
            continue
        rest = sorted(m.A - {m.a}, key=lambda l: (abs(l), l < 0))
        subst[gen.symbol] = tuple(single(l, m.a) for l in rest)

    kept_syms = [gen.symbol for gen in pres.generators if gen.symbol in new_gens]
    # permutations first, then transvections, each in structural order
    kept_syms.sort(key=lambda s: new_gens[s].key)
    order = {s: k for k, s in enumerate(kept_syms)}
    rank = {r: k for k, r in enumerate(RULE_ORDER)}

    inv_set = frozenset(involutions)
    seen: dict[tuple, Relator] = {}
    sources: dict[tuple, set[str]] = defaultdict(set)
    for s in sorted(involutions, key=order.get):
        key = cyclic_key(((s, 1), (s, 1)), order, inv_set)
        seen[key] = Relator(((s, 1), (s, 1)), "R7", {"sigma": new_gens[s].text()})
    for r in sorted(pres.relators, key=lambda r: rank.get(r.rule, len(rank))):
        word = []
        for s, e in r.word:
            w = subst[s]
            word.extend(w if e > 0 else invert(w))
        w = _normalize_involutions(cyclic_free_reduce(word), involutions)
        if not w:
            continue
        key = cyclic_key(w, order, inv_set)
        sources[key].update(r.rule.split("+"))
        if key not in seen:
            seen[key] = Relator(_from_key(key, kept_syms), r.rule, r.params)
    for key, rel in seen.items():
        if sources[key]:
            rel.rule = "+".join(sorted(sources[key], key=lambda t: rank.get(t, len(rank))))

    commuting: list[tuple[str, str]] = []
    simple: list[Relator] = []
    others: list[Relator] = []
    for key in sorted(seen, key=lambda k: (len(k), k)):
        rel = seen[key]
        pair = _rotate_commutator(rel.word)
        if pair:
            a, b = sorted(pair, key=order.get)
            rel = Relator(((a, 1), (b, 1), (a, -1), (b, -1)), rel.rule, rel.params)
            if (a, b) not in commuting:
                commuting.append((a, b))
                simple.append(rel)
        else:
            others.append(rel)

    raag = CommutationGraph(kept_syms, commuting)
    letter = {s: k + 1 for k, s in enumerate(kept_syms)}

    def trivial_mod_commutation(word: Iterable[tuple[str, int]]) -> bool:
        return not normal_form(raag, [letter[s] * e for s, e in word])

    type1 = {s for s in kept_syms if new_gens[s].is_type1}
    actions: dict[tuple[str, int], dict[str, SymWord]] = defaultdict(dict)
    kept: list[Relator] = []
    for rel in others:
        if trivial_mod_commutation(rel.word):
            continue
        split = _action_form(rel.word, type1, involutions)
        if split is None:
            kept.append(rel)
            continue
        s, e, u, v = split
        # s^-e u s^e = v^-1
        act = actions[(s, e)]
        predicted = []
        for t, f in u:
            if t not in act:
                predicted = None
                break
            predicted.extend(act[t] if f > 0 else invert(act[t]))
        if predicted is None or not trivial_mod_commutation(tuple(predicted) + tuple(v)):
            kept.append(rel)
        if len(u) == 1 and len(v) == 1:
            (t, f), = u
            img = invert(v)
            act.setdefault(t, img if f > 0 else invert(img))
            (h, k), = img
            back = actions[(s, e if s in involutions else -e)]
            back.setdefault(h, u if k > 0 else invert(u))

    def final_key(rel: Relator):
        return (tuple(rank.get(t, len(rank)) for t in rel.rule.split("+")), len(rel.word), tuple((order[s], e) for s, e in rel.word))

    relators = sorted(simple + kept, key=final_key)
    gens = [Generator(s, new_gens[s]) for s in kept_syms]
    meta = dict(pres.meta)
    meta["stage"] = "reduced"
    return Presentation(g, gens, relators, meta)


def _action_form(word: SymWord, type1: set[str], involutions: set[str]):
    """Split a rotation of the word as ``s^-e u s^e v`` with s a permutation occurring twice."""
    for s in type1:
        pos = [k for k, (t, _) in enumerate(word) if t == s]
        if len(pos) != 2:
            continue
        for start in pos:
            rot = word[start:] + word[:start]
            k = next(j for j in range(1, len(rot)) if rot[j][0] == s)
            e1, e2 = rot[0][1], rot[k][1]
            if s not in involutions and e1 != -e2:
                continue
            u, v = rot[1:k], rot[k + 1:]
            if not u or any(t in type1 for t, _ in u):
                continue
            return s, e2, u, v
    return None


def rule_words(pres: Presentation) -> dict[str, list[SymWord]]:
    out: dict[str, list[SymWord]] = defaultdict(list)
    for r in pres.relators:
        out[r.rule].append(r.word)
    return dict(out)
