"""Stabilisers of admissible subgroups in automorphism groups of partially commutative groups."""

from .graph import CommutationGraph, GraphError, build_lattice, class_partition
from .endomap import EndoMap
from .whitehead import WhiteheadAuto, enumerate_family, make_type2, parse_auto

__all__ = [
    "CommutationGraph", "GraphError", "build_lattice", "class_partition",
    "EndoMap", "WhiteheadAuto", "enumerate_family", "make_type2", "parse_auto",
]
