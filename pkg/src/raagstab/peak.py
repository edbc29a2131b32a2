"""Peak reduction over the Whitehead generators of a free-case class, and a word-problem certifier.

Factorisations are sequences of members of Omega_x.  Inverses are never
stored: the inverse of a Type 2 generator is its R1 partner and the
inverse of a permutation is the inverse permutation, both again in
Omega_x.  Every rewriting is recorded as a sequence of words in which
consecutive words differ by one relator of R_x, so a certificate can be
replayed against the relator list alone.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .endomap import EndoMap
from .graph import CommutationGraph, class_partition
from .presentation import Presentation
from .relations import build_Rx, omega_index
from .whitehead import WhiteheadAuto, sigma
from .words import Word, conjugacy_canonical, conjugacy_length, format_word, word_key

Chain = list[tuple[WhiteheadAuto, ...]]


class PeakError(RuntimeError):
    """A peak could not be lowered; this indicates a bug, not bad input."""


class CertificateError(ValueError):
    """A certificate step is not justified by a relator."""


# -- conjugacy tuples --

@dataclass(frozen=True)
class ConjTuple:
    graph: CommutationGraph
    members: tuple[Word, ...]

    def length(self) -> int:
        return sum(conjugacy_length(self.graph, w) for w in self.members)

    def apply(self, auto: WhiteheadAuto) -> "ConjTuple":
        return ConjTuple(self.graph, tuple(auto.apply(w) for w in self.members))

    def apply_all(self, autos: Iterable[WhiteheadAuto]) -> "ConjTuple":
        out = self
        for a in autos:
            out = out.apply(a)
        return out


def build_C2(g: CommutationGraph, x: str) -> ConjTuple:
    """One length-2 representative of each conjugacy class of length 2 in the class subgroup."""
    info = class_partition(g, x)
    if info.abelian:
        raise ValueError(f"class of {x} is in the abelian case")
    letters = [s * (g.vid(v) + 1) for v in info.members for s in (1, -1)]
    reps = set()
    for y, z in itertools.product(letters, repeat=2):
        if y == -z:
            continue
        reps.add(conjugacy_canonical(g, (y, z)))
    return ConjTuple(g, tuple(sorted(reps, key=word_key)))


# -- the generator context --

class OmegaContext:
    """Omega_x with partner (inverse) lookup and the relators used to justify rewriting."""

    def __init__(self, g: CommutationGraph, x: str):
        self.graph = g
        self.x = x
        self.info = class_partition(g, x)
        self.om = omega_index(g, x)
        self.cls = frozenset(s * (g.vid(v) + 1) for v in self.info.members for s in (1, -1))
        self.outer = frozenset(s * (g.vid(v) + 1) for v in self.info.outer for s in (1, -1))
        self.by_images = {m.endo.images: m for m in self.om.members}
        self._partner = {}
        for m in self.om.members:
            if m.is_type1:
                self._partner[m] = self.om.by_perm[m.inverse().perm]
            else:
                self._partner[m] = self.om.find_pair((m.A - {m.a}) | {-m.a}, -m.a)
        self._presentation = None
        self._relator_index = None

    def member(self, A: Iterable[int], a: int) -> WhiteheadAuto | None:
        return self.om.find_pair(A, a)

    def partner(self, m: WhiteheadAuto) -> WhiteheadAuto:
        return self._partner[m]

    def sym(self, m: WhiteheadAuto) -> str:
        return self.om.sym(m)

    def from_images(self, images) -> WhiteheadAuto | None:
        return self.by_images.get(tuple(images))

    def sigma(self, a: int, b: int) -> WhiteheadAuto:
        return self.om.find(sigma(self.graph, a, b))

    def positive(self, word: Iterable[tuple[WhiteheadAuto, int]]) -> tuple[WhiteheadAuto, ...]:
        return tuple(m if e > 0 else self.partner(m) for m, e in word)

    def invert(self, word: Sequence[WhiteheadAuto]) -> tuple[WhiteheadAuto, ...]:
        return tuple(self.partner(m) for m in reversed(word))

    def adjacent(self, a: int, b: int) -> bool:
        return bool(self.graph.adj[abs(a) - 1] >> (abs(b) - 1) & 1)

    def compose(self, word: Iterable[WhiteheadAuto]) -> EndoMap:
        out = EndoMap.identity(self.graph)
        for m in word:
            out = out.then(m.endo)
        return out

    @property
    def presentation(self) -> Presentation:
        if self._presentation is None:
            self._presentation = build_Rx(self.graph, self.x)
        return self._presentation

    @property
    def relator_index(self) -> dict:
        if self._relator_index is None:
            pres = self.presentation
            index = {}
            for r in pres.relators:
                word = self.positive((pres.auto(s), e) for s, e in r.word)
                key = self.cyclic_key(word)
                if key and key not in index:
                    index[key] = r
            self._relator_index = index
        return self._relator_index

    # -- words modulo the inverse identification --

    def _reduced(self, word: Sequence[WhiteheadAuto]) -> list[tuple[str, int]]:
        """Reduced form where each generator is identified with the inverse of its partner."""
        out: list[tuple[str, int]] = []
        for m in word:
            p = self.partner(m)
            s, t = self.sym(m), self.sym(p)
            if m is p:
                letter = (s, 1)
            elif s < t:
                letter = (s, 1)
            else:
                letter = (t, -1)
            if out and out[-1][0] == letter[0] and (out[-1][1] == -letter[1] or m is p):
                out.pop()
            else:
                out.append(letter)
        return out

    def cyclic_key(self, word: Sequence[WhiteheadAuto]) -> tuple:
        w = self._reduced(word)
        involutions = {self.sym(m) for m in word if self.partner(m) is m}
        while len(w) >= 2 and w[0][0] == w[-1][0] and (w[0][1] == -w[-1][1] or w[0][0] in involutions):
            w = w[1:-1]
        if not w:
            return ()
        inv = [(s, 1 if s in involutions else -e) for s, e in reversed(w)]
        best = None
        for cand in (w, inv):
            for k in range(len(cand)):
                rot = tuple(cand[k:] + cand[:k])
                if best is None or rot < best:
                    best = rot
        return best


# -- peaks --

def is_peak(alpha: WhiteheadAuto, beta: WhiteheadAuto, C: ConjTuple) -> bool:
    """Whether the composite ``alpha beta`` is a peak with respect to C."""
    c0 = C.length()
    c1 = C.apply(alpha)
    h1 = c1.length()
    h2 = c1.apply(beta).length()
    return h1 >= c0 and h1 >= h2 and (h1 > c0 or h1 > h2)


CASE_LABELS = ("1", "2", "3a", "3b", "3c", "3*a", "3*b", "3*c", "4a", "4b-i", "4b-ii")


@dataclass
class PeakCaseTrace:
    label: str
    alpha: str
    beta: str
    delta: list[str]
    relations: list[str] = field(default_factory=list)
    interchanged: bool = False
    chain: list = field(default_factory=list, repr=False)


def _heights(C: ConjTuple, word: Sequence[WhiteheadAuto]) -> list[int]:
    out = [C.length()]
    cur = C
    for m in word:
        cur = cur.apply(m)
        out.append(cur.length())
    return out


def _contract_ok(ctx: OmegaContext, alpha, beta, delta, C: ConjTuple) -> bool:
    top = C.apply(ctx.partner(alpha)).length()
    hs = _heights(C, delta)
    return all(h < top for h in hs[1:len(delta)])


class _NoLowering(Exception):
    pass


def _case_chain(ctx: OmegaContext, al: WhiteheadAuto, be: WhiteheadAuto, C: ConjTuple,
                allow_case4: bool) -> tuple[str, bool, Chain]:
    """Label, interchange flag and rewriting chain from ``(al^-1, be)`` to a lowering."""
    inv = ctx.partner
    start = (inv(al), be)
    if al.is_type1:
        bp = ctx.member({_perm_letter(al, l) for l in be.A}, _perm_letter(al, be.a)) if not be.is_type1 else None
        if bp is None:
            raise _NoLowering("both factors are permutations")
        return "1", False, [start, (bp, inv(al))]
    if be.is_type1:
        ap = ctx.member({_perm_letter(be, l) for l in al.A}, _perm_letter(be, al.a))
        return "1", True, [start, (be, inv(ap))]
    A, a, B, b = al.A, al.a, be.A, be.a
    if ctx.adjacent(a, b):
        return "2", False, [start, (be, inv(al))]
    if not A & B:
        if abs(a) == abs(b):
            return "3a", False, [start, (_need(ctx, (A - {a}) | B, -a),)]
        if -a not in B:
            if -b not in A:
                return "3b", False, [start, (be, inv(al))]
            return "3b", False, [start, (be, _need(ctx, ((A | B) - {a, b}) | {-a}, -a))]
        if -b in A:
            bp = _need(ctx, B, -a)
            g1 = _need(ctx, (A | B) - {a}, -a)
            sg = ctx.sigma(a, b)
            g3 = _need(ctx, (B - {-a, b}) | {a, -b}, a)
            return "3c", False, [start, (inv(al), bp, inv(bp), be), (g1, inv(bp), be), (g1, sg, g3)]
        return _interchange(ctx, al, be, C, allow_case4, "3b")
    if A <= B:
        return _case3star(ctx, al, be, C)
    if B <= A:
        return _interchange(ctx, al, be, C, allow_case4, None)
    if not allow_case4:
        raise _NoLowering("case 4 inside case 4")
    return _case4(ctx, al, be, C)


def _perm_letter(s: WhiteheadAuto, l: int) -> int:
    return s.letter_image(l)[0]


def _need(ctx: OmegaContext, A, a) -> WhiteheadAuto | None:
    """The member (A, a); None when A is just {a}, which is the identity."""
    if set(A) == {a}:
        return None
    m = ctx.member(A, a)
    if m is None:
        raise _NoLowering(f"({sorted(A)}, {a}) is not in Omega_x")
    return m


def _drop(chain: Chain) -> Chain:
    out = []
    for w in chain:
        w = tuple(m for m in w if m is not None)
        if not out or out[-1] != w:
            out.append(w)
    return out


def _interchange(ctx, al, be, C, allow_case4, expect):
    # beta^-1 alpha is a peak for C alpha^-1 beta; invert its lowering
    C2 = C.apply(ctx.partner(al)).apply(be)
    label, _, chain = _case_chain(ctx, be, al, C2, allow_case4)
    return label, True, [ctx.invert(w) for w in chain]


def _case3star(ctx: OmegaContext, al, be, C):
    inv = ctx.partner
    A, a, B, b = al.A, al.a, be.A, be.a
    start = (inv(al), be)
    if a == b:
        if A == B:
            return "3*a", False, [start, ()]
        return "3*a", False, [start, (_need(ctx, (B - A) | {a}, a),)]
    if -a in B:
        if b not in A:
            return "3*b", False, [start, (be, inv(al))]
        return "3*b", False, [start, (be, inv(_need(ctx, (B - A) | {-b}, -a)))]
    if b not in A:
        return "3*c", False, [start, (_need(ctx, (B - A) | {a}, b), inv(al))]
    # choose by measurement between the two named factorisations
    top = C.apply(inv(al)).length()
    options = []
    ba = ctx.member(B, a)
    if ba is not None:
        g1 = _need(ctx, (B - A) | {a}, a)
        sg = ctx.sigma(-a, b)
        g3 = _need(ctx, (B - {a, b}) | {-a, -b}, -a)
        options.append(_drop([start, (inv(al), ba, inv(ba), be), (g1, inv(ba), be), (g1, sg, g3)]))
    ab = ctx.member(A, b)
    if ab is not None:
        g3 = _need(ctx, (B - A) | {b}, b)
        sg = ctx.sigma(a, b)
        eps = _need(ctx, (A - {b}) | {-b}, a)
        zeta = _need(ctx, (A - {a}) | {-a}, b)
        options.append(_drop([start, (inv(al), ab, g3), (inv(al), sg, eps, inv(sg), g3), (zeta, inv(sg), g3)]))
    for chain in options:
        delta = chain[-1]
        hs = _heights(C, delta)
        if all(h < top for h in hs[1:len(delta)]):
            return "3*c", False, chain
    raise _NoLowering("neither candidate of the mixed sub-case lowers the peak")


def _case4_label(ctx: OmegaContext, al, be) -> str:
    g = ctx.graph
    a, b = al.a, be.a
    lk_a = g.adj[abs(a) - 1]
    lk_b = g.adj[abs(b) - 1]
    if lk_a == lk_b and abs(a) != abs(b):
        return "4a"
    if a in be.A or b in al.A:
        return "4b-i"
    return "4b-ii"


def _case4(ctx: OmegaContext, al, be, C):
    label = _case4_label(ctx, al, be)
    for flip in (False, True):
        x, y = (be, al) if flip else (al, be)
        Cx = C.apply(ctx.partner(al)).apply(be) if flip else C
        try:
            chain = _case4_side(ctx, x, y, Cx)
        except _NoLowering:
            continue
        if flip:
            chain = [ctx.invert(w) for w in chain]
        return label, flip, chain
    raise _NoLowering("no named candidate lowers the peak")


def _case4_side(ctx: OmegaContext, al, be, C) -> Chain:
    inv = ctx.partner
    A, a, B = al.A, al.a, be.A
    top = C.apply(inv(al)).length()
    base = C.apply(inv(al))
    sets = [A & B, A - B, B - A, A | B]
    seen = set()
    for S, m in itertools.product(sets, (a, -a)):
        gam = ctx.member(S | {m}, m)
        if gam is None or gam in seen:
            continue
        seen.add(gam)
        hat = ctx.from_images(ctx.compose((inv(al), gam)).images)
        if hat is None or base.apply(gam).length() >= top:
            continue
        Chat = C.apply(hat)
        try:
            _, _, inner = _case_chain(ctx, gam, be, Chat, allow_case4=False)
        except _NoLowering:
            continue
        delta = (hat,) + inner[-1]
        hs = _heights(C, delta)
        if not all(h < top for h in hs[1:len(delta)]):
            continue
        start = (inv(al), be)
        chain = [start, (inv(al), gam, inv(gam), be), (hat, inv(gam), be)]
        chain.extend((hat,) + w for w in inner[1:])
        return chain
    raise _NoLowering("no candidate on this side")


def lower_peak(ctx: OmegaContext, alpha: WhiteheadAuto, beta: WhiteheadAuto, C: ConjTuple):
    """Lower the peak ``alpha^-1 beta`` with respect to C.

    Returns the lowering and a trace holding the rewriting chain.  The composite
    and the strict intermediate heights are checked before returning.
    """
    om = ctx.om
    if om.find(alpha) is None or om.find(beta) is None:
        raise ValueError("both factors must lie in Omega_x")
    if not is_peak(ctx.partner(alpha), beta, C):
        raise ValueError("input is not a peak")
    try:
        label, flipped, chain = _case_chain(ctx, alpha, beta, C, allow_case4=True)
    except _NoLowering as e:
        raise PeakError(f"cannot lower {alpha.text()} / {beta.text()}: {e}") from None
    delta = chain[-1]
    if ctx.compose(delta) != ctx.compose((ctx.partner(alpha), beta)):
        raise PeakError(f"case {label} produced a different automorphism")
    if not _contract_ok(ctx, alpha, beta, delta, C):
        raise PeakError(f"case {label} did not lower the peak {alpha.text()} / {beta.text()}")
    rels = [justify(ctx, u, v)[0] for u, v in zip(chain, chain[1:])]
    trace = PeakCaseTrace(label, alpha.text(), beta.text(), [d.text() for d in delta], rels, flipped, chain)
    return list(delta), trace


# -- rewriting bookkeeping --

def _strip(u: Sequence, v: Sequence) -> tuple[int, list, list]:
    p = 0
    while p < len(u) and p < len(v) and u[p] == v[p]:
        p += 1
    s = 0
    while s < len(u) - p and s < len(v) - p and u[len(u) - 1 - s] == v[len(v) - 1 - s]:
        s += 1
    return p, list(u[p:len(u) - s]), list(v[p:len(v) - s])


def justify(ctx: OmegaContext, before: Sequence[WhiteheadAuto], after: Sequence[WhiteheadAuto]):
    """The relator that turns ``before`` into ``after``, as (rule, params, position)."""
    pos, s, t = _strip(before, after)
    key = ctx.cyclic_key(tuple(s) + ctx.invert(t))
    if not key:
        return "R1", {}, pos
    rel = ctx.relator_index.get(key)
    if rel is None:
        raise CertificateError(
            "no relator for " + " ".join(m.text() for m in s) + " -> " + " ".join(m.text() for m in t))
    return rel.rule, dict(rel.params), pos


@dataclass
class Certificate:
    """A chain of words from the input to the empty word, one relator per step."""

    x: str
    start: list[str]
    steps: list[dict]

    def to_dict(self) -> dict:
        return {"class": self.x, "start": self.start, "steps": self.steps}


class Recorder:
    def __init__(self, ctx: OmegaContext, word: Sequence[WhiteheadAuto]):
        self.ctx = ctx
        self.word = tuple(word)
        self.words = [self.word]

    def replace(self, pos: int, length: int, chain: Chain) -> None:
        pre, post = self.word[:pos], self.word[pos + length:]
        for w in chain[1:]:
            self.push(pre + tuple(w) + post)

    def push(self, word: Sequence[WhiteheadAuto]) -> None:
        self.word = tuple(word)
        self.words.append(self.word)

    def certificate(self) -> Certificate:
        ctx = self.ctx
        steps = []
        for u, v in zip(self.words, self.words[1:]):
            rule, params, pos = justify(ctx, u, v)
            steps.append({"rule": rule, "params": params, "before": [ctx.sym(m) for m in u],
                          "after": [ctx.sym(m) for m in v], "pos": pos})
        return Certificate(ctx.x, [ctx.sym(m) for m in self.words[0]], steps)


def _free_reduce(ctx: OmegaContext, rec: Recorder) -> None:
    changed = True
    while changed:
        changed = False
        w = rec.word
        for k in range(len(w) - 1):
            if ctx.partner(w[k]) is w[k + 1]:
                rec.push(w[:k] + w[k + 2:])
                changed = True
                break


def _peak_measure(hs: list[int]) -> tuple[int, int]:
    peaks = [j for j in range(1, len(hs) - 1)
             if hs[j] >= hs[j - 1] and hs[j] >= hs[j + 1] and (hs[j] > hs[j - 1] or hs[j] > hs[j + 1])]
    if not peaks:
        return (-1, 0)
    m = max(hs[j] for j in peaks)
    return (m, sum(1 for h in hs[1:-1] if h == m))


def peak_reduce(ctx: OmegaContext, word: Sequence[WhiteheadAuto], C: ConjTuple,
                rec: Recorder | None = None) -> tuple[list[WhiteheadAuto], list[PeakCaseTrace]]:
    """Lower the leftmost highest peak until none remain."""
    rec = rec or Recorder(ctx, word)
    traces = []
    while True:
        _free_reduce(ctx, rec)
        w = rec.word
        hs = _heights(C, w)
        measure = _peak_measure(hs)
        if measure[0] < 0:
            return list(w), traces
        j = next(j for j in range(1, len(hs) - 1)
                 if hs[j] == measure[0] and hs[j] >= hs[j - 1] and hs[j] >= hs[j + 1]
                 and (hs[j] > hs[j - 1] or hs[j] > hs[j + 1]))
        Cj = C.apply_all(w[:j - 1])
        _, trace = lower_peak(ctx, ctx.partner(w[j - 1]), w[j], Cj)
        traces.append(trace)
        rec.replace(j - 1, 2, trace.chain)
        new = _peak_measure(_heights(C, rec.word))
        if not new < measure:
            raise PeakError(f"measure did not decrease: {measure} -> {new}")


def is_peak_reduced(word: Sequence[WhiteheadAuto], C: ConjTuple) -> bool:
    return _peak_measure(_heights(C, word))[0] < 0


# -- classification and normal order --

def classify_type(ctx: OmegaContext, beta: WhiteheadAuto) -> str:
    if beta.is_type1:
        return "Type1x"
    b, B = beta.a, beta.A
    if b in ctx.cls and B == ctx.cls - {-b}:
        return "Type2ax"
    if b in ctx.outer and B == ctx.cls | {b}:
        return "Type2bx"
    return "LengthIncreasing"


def normalize_order(ctx: OmegaContext, word: Sequence[WhiteheadAuto], rec: Recorder | None = None) -> list[WhiteheadAuto]:
    """Reorder to 2a factors, then 2b factors, then one permutation."""
    rec = rec or Recorder(ctx, word)
    kinds = [classify_type(ctx, m) for m in rec.word]
    if "LengthIncreasing" in kinds:
        raise ValueError("every factor must be of Type 1x, 2ax or 2bx")
    while True:
        w = rec.word
        i = next((i for i in range(len(w) - 1, 0, -1) if not w[i].is_type1 and w[i - 1].is_type1), None)
        if i is None:
            break
        s, m = w[i - 1], w[i]
        si = ctx.partner(s)
        moved = ctx.member({_perm_letter(si, l) for l in m.A}, _perm_letter(si, m.a))
        rec.push(w[:i - 1] + (moved, s) + w[i + 1:])
    while True:
        w = rec.word
        i = next((i for i in range(len(w) - 1) if w[i].is_type1 and w[i + 1].is_type1), None)
        if i is None:
            break
        prod = ctx.from_images(ctx.compose(w[i:i + 2]).images)
        rec.push(w[:i] + ((prod,) if prod is not None else ()) + w[i + 2:])
    while True:
        w = rec.word
        i = next((i for i in range(len(w) - 1, 0, -1)
                  if classify_type(ctx, w[i]) == "Type2ax" and classify_type(ctx, w[i - 1]) == "Type2bx"), None)
        if i is None:
            break
        rec.push(w[:i - 1] + (w[i], w[i - 1]) + w[i + 1:])
    return list(rec.word)


@dataclass
class NotIdentity:
    moved: str
    image: str


def trivialize(ctx: OmegaContext, word: Sequence[WhiteheadAuto], rec: Recorder | None = None):
    """Cancel a normally ordered factorisation of the identity, or report a moved generator."""
    g = ctx.graph
    images = ctx.compose(word).images
    for i, w in enumerate(images):
        if w != (i + 1,):
            return NotIdentity(g.vertices[i], format_word(g, w))
    rec = rec or Recorder(ctx, word)
    kinds = [classify_type(ctx, m) for m in rec.word]
    order = {"Type2ax": 0, "Type2bx": 1, "Type1x": 2}
    if any(order[k1] > order[k2] for k1, k2 in zip(kinds, kinds[1:])):
        raise ValueError("factorisation is not in normal order")
    # the 2b block: cancel b_p against b_q = b_p^-1 across commuting letters
    while True:
        w = rec.word
        idx = [k for k, m in enumerate(w) if classify_type(ctx, m) == "Type2bx"]
        hit = None
        for p_ in range(len(idx)):
            for q_ in range(p_ + 1, len(idx)):
                p, q = idx[p_], idx[q_]
                if w[q].a == -w[p].a:
                    if all(ctx.adjacent(w[j].a, w[p].a) for j in range(p + 1, q)):
                        hit = (p, q)
                    break
                if not ctx.adjacent(w[q].a, w[p].a):
                    break
            if hit:
                break
        if hit is None:
            break
        p, q = hit
        for j in range(p, q - 1):
            w = rec.word
            rec.push(w[:j] + (w[j + 1], w[j]) + w[j + 2:])
        w = rec.word
        rec.push(w[:q - 1] + w[q + 1:])
    _free_reduce(ctx, rec)
    # the 2a block is a free-group word in the multipliers; free reduction cancels it
    if any(classify_type(ctx, m) == "Type2bx" for m in rec.word):
        raise PeakError("2b block did not cancel")
    if rec.word:
        raise PeakError("identity factorisation did not reduce to the empty word")
    return rec


@dataclass
class WordProblemResult:
    is_identity: bool
    certificate: Certificate | None = None
    not_identity: NotIdentity | None = None
    traces: list[PeakCaseTrace] = field(default_factory=list)


def word_problem(ctx: OmegaContext, word: Iterable[tuple[WhiteheadAuto, int]],
                 C: ConjTuple | None = None) -> WordProblemResult:
    """Decide triviality; for the identity, certify it by peak reduction, reordering and cancellation."""
    pos = ctx.positive(word)
    images = ctx.compose(pos).images
    g = ctx.graph
    for i, w in enumerate(images):
        if w != (i + 1,):
            return WordProblemResult(False, not_identity=NotIdentity(g.vertices[i], format_word(g, w)))
    C = C or build_C2(g, ctx.x)
    rec = Recorder(ctx, pos)
    _, traces = peak_reduce(ctx, pos, C, rec)
    normalize_order(ctx, rec.word, rec)
    trivialize(ctx, rec.word, rec)
    return WordProblemResult(True, rec.certificate(), traces=traces)


def replay(ctx: OmegaContext, cert: Certificate) -> bool:
    """Check each step against the relator list; raises on the first unjustified step."""
    by_sym = {ctx.sym(m): m for m in ctx.om.members}
    prev = cert.start
    for k, step in enumerate(cert.steps):
        if step["before"] != prev:
            raise CertificateError(f"step {k} does not continue from the previous word")
        before = [by_sym[s] for s in step["before"]]
        after = [by_sym[s] for s in step["after"]]
        justify(ctx, before, after)
        prev = step["after"]
    if prev:
        raise CertificateError("certificate does not end at the empty word")
    return True


def label_census(traces: Iterable[PeakCaseTrace]) -> Counter:
    return Counter(t.label for t in traces)
