"""Analyse the nine-vertex example graph and summarise its stabiliser presentation."""

import argparse
import textwrap
from pathlib import Path

from raagstab.assemble import emit_presentation
from raagstab.cli import analyze_report, analyze_text, parse_graph
from raagstab.config import RunConfig

DATA = Path(__file__).resolve().parents[1] / "data" / "nine_vertex.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", default=str(DATA))
    ap.add_argument("--eliminate-perms", action="store_true")
    ap.add_argument("--json", action="store_true", help="print the full presentation as JSON")
    args = ap.parse_args()

    g = parse_graph(Path(args.graph).read_text())
    config = RunConfig(keep_perms=not args.eliminate_perms)
    print(analyze_text(analyze_report(g, config)))
    pres = emit_presentation(g, config)
    if args.json:
        print(pres.to_json())
        return
    print(f"{len(pres.symbols)} generators, {len(pres.relators)} relators (all verified)")
    for rule, n in sorted(pres.rule_counts().items()):
        print(f"  {rule:<14}{n:>5}")
    for lvl in pres.meta["levels"]:
        shapes = ", ".join(f"{c['rep']}:{c['kind']}" for c in lvl["classes"])
        print(f"level {lvl['level']}: {shapes}")
    print(textwrap.fill(" ".join(pres.symbols), width=100))


if __name__ == "__main__":
    main()
