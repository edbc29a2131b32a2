"""Finite presentations whose generators are bound to concrete automorphisms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import CommutationGraph
from .whitehead import WhiteheadAuto
from .words import Word

SymWord = tuple[tuple[str, int], ...]


@dataclass
class Generator:
    symbol: str
    auto: WhiteheadAuto

    @property
    def binding(self) -> str:
        return self.auto.text()


@dataclass
class Relator:
    word: SymWord
    rule: str
    params: dict = field(default_factory=dict)


def free_reduce(word: Iterable[tuple[str, int]]) -> SymWord:
    out: list[tuple[str, int]] = []
    for s, e in word:
        if out and out[-1] == (s, -e):
            out.pop()
        else:
            out.append((s, e))
    return tuple(out)


def cyclic_free_reduce(word: Iterable[tuple[str, int]]) -> SymWord:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == (w[-1][0], -w[-1][1]):
        w = w[1:-1]
    return tuple(w)


def invert(word: Sequence[tuple[str, int]]) -> SymWord:
    return tuple((s, -e) for s, e in reversed(word))


def format_symword(word: Sequence[tuple[str, int]]) -> str:
    if not word:
        return "1"
    return " ".join(s if e == 1 else f"{s}^{e}" for s, e in word)


def evaluate_images(g: CommutationGraph, factors: Iterable[tuple[WhiteheadAuto, int]],
                    start: Sequence[Word] | None = None) -> tuple[Word, ...]:
    """Images of the generators under the product, leftmost factor applied first."""
    images = tuple(start) if start is not None else tuple((i + 1,) for i in range(g.n))
    for auto, e in factors:
        m = auto.endo if e > 0 else auto.endo.inverse()
        images = tuple(m.apply(w) for w in images)
    return images


class Presentation:
    """Generators bound to Whitehead automorphisms, relators over their symbols."""

    def __init__(self, graph: CommutationGraph, generators: Sequence[Generator],
                 relators: Sequence[Relator], meta: dict | None = None):
        self.graph = graph
        self.generators = list(generators)
        self.relators = list(relators)
        self.meta = dict(meta or {})
        self._by_symbol = {gen.symbol: gen for gen in self.generators}
        if len(self._by_symbol) != len(self.generators):
            raise ValueError("duplicate generator symbol")

    def __repr__(self) -> str:
        return f"<Presentation {len(self.generators)} generators, {len(self.relators)} relators>"

    @property
    def symbols(self) -> list[str]:
        return [gen.symbol for gen in self.generators]

    def auto(self, symbol: str) -> WhiteheadAuto:
        return self._by_symbol[symbol].auto

    def evaluate(self, word: Iterable[tuple[str, int]]) -> tuple[Word, ...]:
        return evaluate_images(self.graph, ((self.auto(s), e) for s, e in word))

    def is_trivial(self, word: Iterable[tuple[str, int]]) -> bool:
        return all(w == (i + 1,) for i, w in enumerate(self.evaluate(word)))

    def failures(self) -> list[Relator]:
        """Relators that do not evaluate to the identity automorphism."""
        return [r for r in self.relators if not self.is_trivial(r.word)]

    def verify(self) -> None:
        bad = self.failures()
        if bad:
            raise AssertionError(f"{len(bad)} relators fail, first: {format_symword(bad[0].word)} ({bad[0].rule})")

    def rule_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.relators:
            out[r.rule] = out.get(r.rule, 0) + 1
        return out

    # -- serialisation --

    def to_dict(self) -> dict:
        return {
            "generators": [{"symbol": gen.symbol, "binding": gen.binding} for gen in self.generators],
            "relators": [[[s, e] for s, e in r.word] for r in self.relators],
            "provenance": [{"rule": r.rule, "params": r.params} for r in self.relators],
            **({"meta": self.meta} if self.meta else {}),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_text(self) -> str:
        gens = ", ".join(self.symbols)
        rels = ",\n  ".join(format_symword(r.word) for r in self.relators)
        return f"< {gens} |\n  {rels} >\n"

    def to_gap(self) -> str:
        lines = ["# generator i of F is the symbol on line i below"]
        lines += [f"#  {k + 1}: {s}  =  {self._by_symbol[s].binding}" for k, s in enumerate(self.symbols)]
        index = {s: k + 1 for k, s in enumerate(self.symbols)}
        names = ", ".join(f'"g{k + 1}"' for k in range(len(self.symbols)))
        lines.append(f"F := FreeGroup({names});;")
        rels = []
        for r in self.relators:
            parts = [f"F.{index[s]}" + ("" if e == 1 else f"^{e}") for s, e in r.word]
            rels.append("*".join(parts) if parts else "One(F)")
        lines.append("rels := [" + ",\n  ".join(rels) + "];;")
        lines.append("G := F / rels;;")
        return "\n".join(lines) + "\n"

