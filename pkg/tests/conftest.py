import json
import random
from pathlib import Path

import pytest

from raagstab.graph import CommutationGraph, complete_graph, null_graph, path_graph

DATA = Path(__file__).resolve().parents[1] / "data"


def load_example() -> CommutationGraph:
    doc = json.loads((DATA / "nine_vertex.json").read_text())
    return CommutationGraph(doc["vertices"], doc["edges"])


@pytest.fixture(scope="session")
def nine() -> CommutationGraph:
    return load_example()


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240917)


def small_graphs() -> dict[str, CommutationGraph]:
    out = {"nine": load_example(), "path4": path_graph(4)}
    for n in range(1, 5):
        out[f"null{n}"] = null_graph(n)
        out[f"complete{n}"] = complete_graph(n)
    return out
