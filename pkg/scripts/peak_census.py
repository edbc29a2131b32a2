"""Count which peak-lowering cases fire while reducing random words over Omega_x."""

import argparse
import random
from collections import Counter
from pathlib import Path

from raagstab.cli import parse_graph
from raagstab.peak import CASE_LABELS, OmegaContext, build_C2, is_peak_reduced, peak_reduce

DATA = Path(__file__).resolve().parents[1] / "data" / "nine_vertex.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", default=str(DATA))
    ap.add_argument("--vertex", default="a")
    ap.add_argument("--words", type=int, default=500)
    ap.add_argument("--max-len", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = parse_graph(Path(args.graph).read_text())
    ctx, C = OmegaContext(g, args.vertex), build_C2(g, args.vertex)
    rng = random.Random(args.seed)
    census = Counter()
    for _ in range(args.words):
        w = [rng.choice(ctx.om.members) for _ in range(rng.randint(0, args.max_len))]
        out, traces = peak_reduce(ctx, w, C)
        assert is_peak_reduced(out, C) and ctx.compose(out) == ctx.compose(w)
        census.update(t.label for t in traces)
    print(f"|Omega| = {len(ctx.om.members)}, |C2| = {len(C.members)}, {args.words} words")
    for label in CASE_LABELS:
        print(f"  case {label:<6}{census[label]:>6}")


if __name__ == "__main__":
    main()
