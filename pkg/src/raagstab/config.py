"""Run configuration shared by the assembly code and the command line."""

from __future__ import annotations

from dataclasses import dataclass

FORMATS = ("json", "text", "gap")


@dataclass(frozen=True)
class RunConfig:
    transversal: tuple[str, ...] | None = None
    depth: int = 8
    radius: int = 3
    fmt: str = "json"
    keep_perms: bool = True

    def __post_init__(self):
        if self.depth < 1 or self.radius < 1:
            raise ValueError("search bounds must be positive")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}")
