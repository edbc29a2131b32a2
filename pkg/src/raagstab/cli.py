"""Command line: analyze, decompose, present, certify and wh apply.

Exit codes: 0 success, 2 parse error, 3 validation error, 4 search bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .assemble import AssemblyError, emit_presentation
from .config import FORMATS, RunConfig
from .endomap import EndoMap
from .graph import CommutationGraph, GraphError, build_lattice, class_partition
from .peak import OmegaContext, word_problem
from .stabilizer import MembershipError, SearchBoundError, find_inverse, is_in_stK, tower_factorize
from .whitehead import WhiteheadError, parse_auto
from .words import (ConjugacyBoundError, conjugacy_canonical, conjugacy_length, format_word,
                    normal_form, parse_word)

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_SEARCH = 0, 2, 3, 4


class ParseError(ValueError):
    pass


# -- input --

def read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def parse_graph(text: str) -> CommutationGraph:
    """JSON ``{"vertices": [...], "edges": [[u, v], ...]}`` or an edge list."""
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}") from None
        if not isinstance(doc, dict) or not isinstance(doc.get("vertices"), list):
            raise ParseError("graph JSON needs a 'vertices' list")
        edges = doc.get("edges", [])
        if not all(isinstance(e, list) and len(e) == 2 for e in edges):
            raise ParseError("each edge must be a pair of vertex names")
        return CommutationGraph([str(v) for v in doc["vertices"]], [tuple(map(str, e)) for e in edges])
    vertices: list[str] = []
    edges = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) > 2:
            raise ParseError(f"line {n}: expected 'u v' or a single vertex")
        for v in line:
            if v not in vertices:
                vertices.append(v)
        if len(line) == 2:
            edges.append(tuple(line))
    return CommutationGraph(vertices, edges)


def load_graph(path: str) -> CommutationGraph:
    try:
        return parse_graph(read_source(path))
    except OSError as e:
        raise ParseError(str(e)) from None


def parse_map(g: CommutationGraph, spec: str) -> EndoMap:
    """``v=word, ...`` images, or Whitehead factors separated by ';' (``^-1`` inverts a factor)."""
    if "=" in spec:
        images = {}
        for part in spec.split(","):
            v, _, w = part.partition("=")
            v = v.strip()
            if v not in g.vertices:
                raise ParseError(f"unknown vertex {v!r}")
            images[v] = parse_word(g, w)
        return EndoMap.from_names(g, images)
    out = EndoMap.identity(g)
    for part in spec.split(";"):
        part = part.strip()
        inv = part.endswith("^-1")
        if inv:
            part = part[:-3].strip()
            if part.startswith("(") and part.endswith(")"):
                part = part[1:-1]
        if not part:
            continue
        m = parse_auto(g, part).endo
        out = out.then(m.inverse() if inv else m)
    return out


def parse_symword(ctx: OmegaContext, text: str):
    by_sym = {ctx.sym(m): m for m in ctx.om.members}
    word = []
    for tok in text.split():
        if tok == "1":
            continue
        sym, e = tok, 1
        if tok.endswith("^-1"):
            sym, e = tok[:-3], -1
        if sym not in by_sym:
            raise ParseError(f"unknown generator {sym!r}; known: {', '.join(sorted(by_sym))}")
        word.append((by_sym[sym], e))
    return word


# -- output --

def emit(obj, fmt: str, text: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(text)


# -- commands --

def analyze_report(g: CommutationGraph, config: RunConfig) -> dict:
    lat = build_lattice(g, config.transversal)
    classes = []
    for y in lat.transversal:
        info = class_partition(g, y)
        classes.append({
            "rep": y, "members": list(info.members), "admissible": list(lat.node_of(y).admissible),
            "height": lat.height(y), "case": "abelian" if info.abelian else "free",
            "short": list(info.short), "outer": list(info.outer),
        })
    levels = [{"k": k, "v": list(lat.level(k)), "C": list(lat.reps(k)), "A": list(lat.union(k))}
              for k in range(lat.height_max + 1)]
    return {"vertices": list(g.vertices), "height": lat.height_max, "classes": classes, "levels": levels,
            "cover": [[list(a), list(b)] for a, b in lat.cover_pairs()]}


def analyze_text(rep: dict) -> str:
    lines = [f"height {rep['height']}", "",
             f"{'class':<16}{'admissible set':<24}{'h':>3}  case     short / outer"]
    for c in rep["classes"]:
        lines.append(f"{'{' + ','.join(c['members']) + '}':<16}{'{' + ','.join(c['admissible']) + '}':<24}"
                     f"{c['height']:>3}  {c['case']:<8} {{{','.join(c['short'])}}} / {{{','.join(c['outer'])}}}")
    lines.append("")
    for lv in rep["levels"]:
        lines.append(f"level {lv['k']}: v={{{','.join(lv['v'])}}} C={{{','.join(lv['C'])}}} "
                     f"A={{{','.join(lv['A'])}}}")
    lines.append("")
    for a, b in rep["cover"]:
        lines.append("{" + ",".join(a) + "} < {" + ",".join(b) + "}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args, config: RunConfig) -> int:
    g = load_graph(args.graph)
    if args.dot:
        sys.stdout.write(build_lattice(g, config.transversal).to_dot())
        return EXIT_OK
    rep = analyze_report(g, config)
    emit(rep, config.fmt, analyze_text(rep))
    return EXIT_OK


def cmd_decompose(args, config: RunConfig) -> int:
    g = load_graph(args.graph)
    phi = parse_map(g, args.auto)
    if not phi.is_homomorphism():
        raise MembershipError("images do not define a homomorphism")
    if phi.inverse_images is None:
        inv = find_inverse(g, phi, config.depth)
        if inv is None:
            raise SearchBoundError(f"no inverse found within depth {config.depth}")
        phi = EndoMap(g, phi.images, inv.images)
    if not is_in_stK(g, phi, config.depth):
        raise MembershipError("automorphism is not in the stabiliser")
    lat = build_lattice(g, config.transversal)
    tower = tower_factorize(g, phi, lat)
    rep = {
        "map": phi.describe(),
        "levels": [{"level": k, "factors": [{"class": y, "map": m.describe()} for y, m in fs]}
                   for k, fs in tower.per_level],
        "residual": tower.residual.describe(),
        "recomposes": tower.recompose() == phi,
    }
    lines = [f"map: {rep['map']}"]
    for lv in rep["levels"]:
        for f in lv["factors"]:
            lines.append(f"level {lv['level']}  class {f['class']}: {f['map']}")
    lines.append(f"recomposes: {rep['recomposes']}")
    emit(rep, config.fmt, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_present(args, config: RunConfig) -> int:
    g = load_graph(args.graph)
    pres = emit_presentation(g, config)
    if config.fmt == "json":
        body = pres.to_json()
    elif config.fmt == "gap":
        body = pres.to_gap()
    else:
        body = pres.to_text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return EXIT_OK


def cmd_certify(args, config: RunConfig) -> int:
    g = load_graph(args.graph)
    if args.x not in g.vertices:
        raise ParseError(f"unknown vertex {args.x!r}")
    if class_partition(g, args.x).abelian:
        raise MembershipError(f"class of {args.x} is in the abelian case")
    ctx = OmegaContext(g, args.x)
    word = parse_symword(ctx, args.word)
    res = word_problem(ctx, word)
    if res.is_identity:
        cert = res.certificate.to_dict()
        rep = {"identity": True, "certificate": cert, "cases": [t.label for t in res.traces]}
        text = f"identity: {len(cert['steps'])} steps\n" + "".join(
            f"{k:>4} {s['rule']:<8} {' '.join(s['after']) or '1'}\n" for k, s in enumerate(cert["steps"]))
    else:
        ni = res.not_identity
        rep = {"identity": False, "moved": ni.moved, "image": ni.image}
        text = f"not the identity: {ni.moved} -> {ni.image}\n"
    emit(rep, config.fmt, text)
    return EXIT_OK


def cmd_wh_apply(args, config: RunConfig) -> int:
    g = load_graph(args.graph)
    phi = parse_map(g, args.auto)
    w = normal_form(g, parse_word(g, args.word))
    img = phi.apply(w)
    try:
        canon = format_word(g, conjugacy_canonical(g, img, max_core=config.radius + 1))
    except ConjugacyBoundError:
        canon = None
    rep = {"word": format_word(g, w), "image": format_word(g, img), "length": len(img),
           "conjugacy_length": conjugacy_length(g, img), "conjugacy_canonical": canon}
    emit(rep, config.fmt, rep["image"] + "\n")
    return EXIT_OK


# -- entry point --

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--depth", type=int, default=8)
    common.add_argument("--radius", type=int, default=3)
    common.add_argument("--transversal", default=None, help="comma separated class representatives")
    perms = common.add_mutually_exclusive_group()
    perms.add_argument("--keep-perms", dest="keep_perms", action="store_true", default=True)
    perms.add_argument("--eliminate-perms", dest="keep_perms", action="store_false")

    p = argparse.ArgumentParser(prog="raagstab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    a = sub.add_parser("analyze", parents=[common], help="lattice, classes, heights and levels")
    a.add_argument("graph")
    a.add_argument("--dot", action="store_true", help="print the inclusion diagram as DOT")
    a.set_defaults(func=cmd_analyze, default_fmt="text")
    d = sub.add_parser("decompose", parents=[common], help="level and class factors of an automorphism")
    d.add_argument("graph")
    d.add_argument("auto")
    d.set_defaults(func=cmd_decompose, default_fmt="text")
    pr = sub.add_parser("present", parents=[common], help="finite presentation of the stabiliser")
    pr.add_argument("graph")
    pr.add_argument("-o", "--output")
    pr.set_defaults(func=cmd_present, default_fmt="json")
    c = sub.add_parser("certify", parents=[common], help="decide and certify a word over Omega_x")
    c.add_argument("graph")
    c.add_argument("x")
    c.add_argument("word")
    c.set_defaults(func=cmd_certify, default_fmt="json")
    wh = sub.add_parser("wh", help="Whitehead automorphism utilities")
    whs = wh.add_subparsers(dest="whcmd", required=True)
    ap = whs.add_parser("apply", parents=[common], help="apply an automorphism to a word")
    ap.add_argument("graph")
    ap.add_argument("auto")
    ap.add_argument("word")
    ap.set_defaults(func=cmd_wh_apply, default_fmt="text")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        transversal = tuple(t.strip() for t in args.transversal.split(",")) if args.transversal else None
        config = RunConfig(transversal, args.depth, args.radius, args.format or args.default_fmt,
                           args.keep_perms)
        return args.func(args, config)
    except (ParseError, GraphError, WhiteheadError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except SearchBoundError as e:
        print(f"search bound exceeded: {e}", file=sys.stderr)
        return EXIT_SEARCH
    except (MembershipError, AssemblyError, ValueError) as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
