"""Endomorphisms of a partially commutative group given by generator images.

Maps act on the right: ``x(phi psi) = (x phi) psi``, so ``phi.then(psi)``
applies ``phi`` first.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .graph import CommutationGraph
from .words import Word, format_word, inverse, normal_form


class EndoMap:
    """Images of the generators, with the inverse map when it is known."""

    __slots__ = ("graph", "images", "inverse_images", "_table")

    def __init__(self, graph: CommutationGraph, images: Sequence[Sequence[int]],
                 inverse_images: Sequence[Sequence[int]] | None = None):
        self.graph = graph
        self.images = tuple(normal_form(graph, w) for w in images)
        self.inverse_images = (None if inverse_images is None
                               else tuple(normal_form(graph, w) for w in inverse_images))
        self._table = None

    @classmethod
    def trusted(cls, graph: CommutationGraph, images, inverse_images=None) -> "EndoMap":
        """Build from words already in normal form, skipping normalisation."""
        m = cls.__new__(cls)
        m.graph = graph
        m.images = tuple(images)
        m.inverse_images = None if inverse_images is None else tuple(inverse_images)
        m._table = None
        return m

    @classmethod
    def identity(cls, g: CommutationGraph) -> "EndoMap":
        ids = tuple((i + 1,) for i in range(g.n))
        return cls.trusted(g, ids, ids)

    @classmethod
    def from_names(cls, g: CommutationGraph, images: dict[str, Sequence[int]]) -> "EndoMap":
        return cls(g, [images.get(v, (i + 1,)) for i, v in enumerate(g.vertices)])

    def __eq__(self, other) -> bool:
        return isinstance(other, EndoMap) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return "EndoMap(" + self.describe() + ")"

    def describe(self) -> str:
        g = self.graph
        parts = [f"{v} -> {format_word(g, w)}" for v, w in zip(g.vertices, self.images)
                 if w != (g.vid(v) + 1,)]
        return ", ".join(parts) if parts else "identity"

    @property
    def is_identity(self) -> bool:
        return all(w == (i + 1,) for i, w in enumerate(self.images))

    def image(self, name: str) -> Word:
        return self.images[self.graph.vid(name)]

    def _letter_table(self) -> dict[int, Word]:
        if self._table is None:
            t = {}
            for i, w in enumerate(self.images):
                t[i + 1] = w
                t[-(i + 1)] = inverse(w)
            self._table = t
        return self._table

    def apply(self, w: Iterable[int]) -> Word:
        t = self._letter_table()
        out = []
        for l in w:
            out.extend(t[l])
        return normal_form(self.graph, out)

    def then(self, other: "EndoMap") -> "EndoMap":
        imgs = tuple(other.apply(w) for w in self.images)
        inv = None
        if self.inverse_images is not None and other.inverse_images is not None:
            inv = tuple(self._inverse_map().apply(w) for w in other.inverse_images)
        return EndoMap.trusted(self.graph, imgs, inv)

    def _inverse_map(self) -> "EndoMap":
        return EndoMap.trusted(self.graph, self.inverse_images, self.images)

    def inverse(self) -> "EndoMap":
        if self.inverse_images is None:
            raise ValueError("inverse map not known")
        return self._inverse_map()

    def conjugate_by(self, other: "EndoMap") -> "EndoMap":
        """``other^-1 * self * other``."""
        return other.inverse().then(self).then(other)

    def is_homomorphism(self) -> bool:
        g = self.graph
        for i in range(g.n):
            for j in range(i + 1, g.n):
                if g.adj[i] >> j & 1:
                    a, b = self.images[i], self.images[j]
                    if normal_form(g, a + b) != normal_form(g, b + a):
                        return False
        return True


def compose(g: CommutationGraph, maps: Iterable[EndoMap]) -> EndoMap:
    out = EndoMap.identity(g)
    for m in maps:
        out = out.then(m)
    return out
