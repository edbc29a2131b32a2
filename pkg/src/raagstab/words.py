"""Arithmetic in the partially commutative group of a commutation graph.

A letter is a nonzero int: ``i + 1`` for the generator with vertex index
``i`` and ``-(i + 1)`` for its inverse.  A word is a tuple of letters.
Normal forms are shortlex-least geodesics under the order "vertex order,
positive letter before negative letter".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import CommutationGraph, GraphError

Word = tuple[int, ...]


class ConjugacyBoundError(ValueError):
    """Cyclic core too long for the enumerated conjugacy canonical form."""


def letter_key(l: int) -> int:
    return 2 * (abs(l) - 1) + (l < 0)


def word_key(w: Sequence[int]) -> tuple:
    return (len(w), tuple(letter_key(l) for l in w))


def inverse(w: Sequence[int]) -> Word:
    return tuple(-l for l in reversed(w))


def letter_of(g: CommutationGraph, name: str, sign: int = 1) -> int:
    return sign * (g.vid(name) + 1)


def letter_name(g: CommutationGraph, l: int) -> str:
    name = g.vertices[abs(l) - 1]
    return name if l > 0 else name + "^-1"


def parse_letter(g: CommutationGraph, token: str) -> int:
    token = token.strip()
    for suffix in ("^-1", "^{-1}", "'"):
        if token.endswith(suffix):
            return -letter_of(g, token[: -len(suffix)])
    if token.endswith("^1"):
        token = token[:-2]
    return letter_of(g, token)


def parse_word(g: CommutationGraph, text: str) -> Word:
    """Parse ``a b^-1 h``; ``1`` or an empty string is the identity."""
    out = []
    for tok in text.replace(",", " ").replace("*", " ").split():
        if tok == "1":
            continue
        base, _, power = tok.partition("^")
        if power and power not in ("-1", "{-1}", "1"):
            try:
                k = int(power.strip("{}"))
            except ValueError:
                raise GraphError(f"bad exponent in {tok!r}") from None
            l = letter_of(g, base)
            out.extend([l if k > 0 else -l] * abs(k))
        else:
            out.append(parse_letter(g, tok))
    return tuple(out)


def format_word(g: CommutationGraph, w: Sequence[int]) -> str:
    return " ".join(letter_name(g, l) for l in w) if w else "1"


def commute(g: CommutationGraph, l: int, m: int) -> bool:
    """Letters commute as generators of the trace monoid (same vertex does not)."""
    return bool(g.adj[abs(l) - 1] >> (abs(m) - 1) & 1)


def reduce_word(g: CommutationGraph, word: Iterable[int]) -> list[int]:
    """Cancel inverse pairs separated only by letters commuting with them."""
    adj = g.adj
    out: list[int] = []
    for l in word:
        v = abs(l) - 1
        j = len(out) - 1
        while j >= 0:
            m = out[j]
            if m == -l:
                del out[j]
                break
            if not adj[v] >> (abs(m) - 1) & 1:
                out.append(l)
                break
            j -= 1
        else:
            out.append(l)
    return out


def lex_normal(g: CommutationGraph, word: Sequence[int]) -> Word:
    """Shortlex-least representative of the trace of a reduced word."""
    adj = g.adj
    rest = list(word)
    out = []
    while rest:
        seen = 0
        best = -1
        best_key = None
        for pos, l in enumerate(rest):
            v = abs(l) - 1
            if seen & ~adj[v] == 0:
                k = 2 * v + (l < 0)
                if best_key is None or k < best_key:
                    best, best_key = pos, k
            seen |= 1 << v
        out.append(rest.pop(best))
    return tuple(out)


def normal_form(g: CommutationGraph, word: Iterable[int]) -> Word:
    return lex_normal(g, reduce_word(g, word))


def multiply(g: CommutationGraph, *words: Sequence[int]) -> Word:
    return normal_form(g, [l for w in words for l in w])


def support(g: CommutationGraph, w: Sequence[int]) -> tuple[str, ...]:
    m = 0
    for l in normal_form(g, w):
        m |= 1 << (abs(l) - 1)
    return g.names(m)


def support_mask(w: Sequence[int]) -> int:
    m = 0
    for l in w:
        m |= 1 << (abs(l) - 1)
    return m


def length(g: CommutationGraph, w: Sequence[int]) -> int:
    return len(normal_form(g, w))


def _first_positions(g: CommutationGraph, w: Sequence[int]) -> list[int]:
    """Positions of letters that can be shuffled to the front."""
    adj = g.adj
    seen = 0
    out = []
    for pos, l in enumerate(w):
        v = abs(l) - 1
        if seen & ~adj[v] == 0:
            out.append(pos)
        seen |= 1 << v
    return out


def _last_positions(g: CommutationGraph, w: Sequence[int]) -> list[int]:
    n = len(w)
    return [n - 1 - p for p in _first_positions(g, w[::-1])]


@dataclass(frozen=True)
class CyclicWord:
    """``original = conjugator^-1 * core * conjugator`` with a cyclically minimal core."""

    core: Word
    conjugator: Word


def cyclic_reduce(g: CommutationGraph, w: Sequence[int]) -> CyclicWord:
    core = list(normal_form(g, w))
    conj: Word = ()
    while True:
        firsts = _first_positions(g, core)
        lasts = {core[p]: p for p in _last_positions(g, core)}
        pick = None
        for p in sorted(firsts, key=lambda p: letter_key(core[p])):
            q = lasts.get(-core[p])
            if q is not None and q != p:
                pick = (p, q)
                break
        if pick is None:
            return CyclicWord(tuple(core), conj)
        p, q = pick
        l = core[p]
        core = [m for k, m in enumerate(core) if k not in (p, q)]
        core = list(normal_form(g, core))
        conj = normal_form(g, (-l,) + conj)


def conjugacy_length(g: CommutationGraph, w: Sequence[int]) -> int:
    return len(cyclic_reduce(g, w).core)


def tuple_conjugacy_length(g: CommutationGraph, words: Iterable[Sequence[int]]) -> int:
    return sum(conjugacy_length(g, w) for w in words)


def conjugacy_canonical(g: CommutationGraph, w: Sequence[int], max_core: int = 4) -> Word:
    """Shortlex-least word in the orbit of the cyclic core under trace rotations."""
    core = cyclic_reduce(g, w).core
    if len(core) > max_core:
        raise ConjugacyBoundError(f"core length {len(core)} exceeds bound {max_core}")
    seen = {core}
    todo = [core]
    while todo:
        cur = todo.pop()
        for p in _first_positions(g, cur):
            nxt = normal_form(g, cur[:p] + cur[p + 1:] + (cur[p],))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return min(seen, key=word_key)
