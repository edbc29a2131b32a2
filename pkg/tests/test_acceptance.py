"""The twelve acceptance criteria, one test each.

Each test prints a single PASS or FAIL line (visible with or without ``-s``)
before asserting, so the suite doubles as a report.
"""

import itertools
import random
from collections import Counter

import pytest

from raagstab.assemble import emit_presentation
from raagstab.graph import admissible, build_lattice, class_partition, sim_class
from raagstab.matrix import mat_inverse, mat_mul
from raagstab.peak import (CASE_LABELS, OmegaContext, build_C2, is_peak, is_peak_reduced, lower_peak,
                           peak_reduce, replay, word_problem)
from raagstab.relations import build_Rx, fast_failures, tietze_reduce
from raagstab.stabilizer import inv_tr, is_in_stK, matrix_split, to_matrix, tower_factorize
from raagstab.whitehead import compose_to_map, enumerate_family, parse_auto
from raagstab.words import conjugacy_length, normal_form

from conftest import load_example, small_graphs
from oracles import ball, bfs_length, brute_conjugacy_length, heap_length, heap_of, random_graph, random_word
from test_peak import relator_product
from test_relations import canon, expected_c_relators, expected_i_relators
from test_stabilizer import random_gl
from test_whitehead import omega_i_expected

G = load_example()


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {title}" + (f" ({detail})" if detail else "")
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def test_c01_golden_example(report):
    adm = {v: set(admissible(G, v)) for v in "acdefhi"}
    lat = build_lattice(G)
    ok = (adm == {"a": set("abdh"), "c": set("cde"), "d": {"d"}, "e": set("de"), "f": set("defg"),
                  "h": {"h"}, "i": set("cdehi")}
          and set(sim_class(G, "a")) == set("ab") and set(sim_class(G, "f")) == set("fg")
          and lat.height_max == 3 and set(lat.level(2)) == set("cfg")
          and set(lat.union(1)) == set("abdeh"))
    report(1, "admissible sets, classes, height and levels of the golden example", ok)


def test_c02_lattice_diagram(report):
    lat = build_lattice(G)
    rep = {frozenset(admissible(G, v)): v for v in "acdefhi"}
    got = {(rep[frozenset(a)], rep[frozenset(b)]) for a, b in lat.cover_pairs()}
    expected = {("h", "i"), ("h", "a"), ("c", "i"), ("d", "a"), ("e", "c"), ("d", "e"), ("e", "f")}
    report(2, "cover relation of the inclusion diagram", got == expected, f"{len(got)} cover pairs")


def test_c03_matrix_model(report):
    m_fd = to_matrix(G, "f", parse_auto(G, "tau f d").endo)
    m_fg = to_matrix(G, "f", parse_auto(G, "tau f g").endo)
    m_if = to_matrix(G, "f", parse_auto(G, "inv f").endo)
    a1 = lambda m: tuple(r[:2] for r in m[:2])
    b = lambda m: tuple(r[2:] for r in m[:2])
    ok = (a1(m_fd) == ((1, 0), (0, 1)) and b(m_fd) == ((1, 0), (0, 0))
          and a1(m_fg) == ((1, 1), (0, 1)) and b(m_fg) == ((0, 0), (0, 0))
          and a1(m_if) == ((-1, 0), (0, 1)))
    gens = [m for m in inv_tr(G) if _in_class_f(m)]
    rng = random.Random(31)
    for _ in range(50):
        phi = compose_to_map(G, [(rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(1, 8))])
        m = to_matrix(G, "f", phi)
        md, mu = matrix_split(m, 2)
        ok &= mat_mul(md, mu) == m
        # theta action: the class-diagonal part acts on the unipotent part by A1^-1 B
        conj = mat_mul(mat_mul(mat_inverse(md), mu), md)
        ok &= a1(conj) == ((1, 0), (0, 1)) and b(conj) == mat_mul(mat_inverse(a1(md)), b(mu))
        a = random_gl(rng, 2)
        bm = tuple(tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(2))
        d = ((a[0][0], a[0][1], 0, 0), (a[1][0], a[1][1], 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
        u = ((1, 0, *bm[0]), (0, 1, *bm[1]), (0, 0, 1, 0), (0, 0, 0, 1))
        ok &= b(mat_mul(mat_mul(mat_inverse(d), u), d)) == mat_mul(mat_inverse(a), bm)
    report(3, "matrix model of the class of f and the unipotent action law", ok, "50 random pairs")


def _in_class_f(m):
    try:
        to_matrix(G, "f", m.endo)
        return True
    except ValueError:
        return False


def test_c04_structure_flags(report):
    e = class_partition(G, "e")
    shapes = {v: (class_partition(G, v).abelian, class_partition(G, v).q, class_partition(G, v).p) for v in "edh"}
    ok = shapes == {"e": (True, 2, 1), "d": (True, 1, 1), "h": (True, 1, 1)}
    pres = emit_presentation(G)
    classes = {c["rep"]: c for lvl in pres.meta["levels"] for c in lvl["classes"]}
    ok &= (classes["e"]["s"], classes["e"]["r"]) == (1, 2) and e.abelian
    ok &= all((classes[v]["s"], classes[v]["r"]) == (1, 1) for v in "dh")
    report(4, "abelian shapes of classes e, d and h", ok)


def test_c05_free_case_splits(report):
    def shorts(x):
        info = class_partition(G, x)
        return {f"tau:{v}:{z}" for v in info.members for z in info.short}

    ok = shorts("a") == {"tau:a:d", "tau:b:d"} and shorts("c") == {"tau:c:d"} and shorts("i") == {"tau:i:h"}
    for s in shorts("a") | shorts("c") | shorts("i"):
        _, v, z = s.split(":")
        ok &= is_in_stK(G, parse_auto(G, f"tau {v} {z}").endo)
    report(5, "short-range generators of the free classes a, c and i", ok)


def test_c06_omega_and_relations(report):
    om = {m.symbol("i") for m in enumerate_family(G, "omega", "i")}
    pres_i = build_Rx(G, "i")
    ri, rc = tietze_reduce(pres_i), tietze_reduce(build_Rx(G, "c"))
    ok = om == omega_i_expected()
    ok &= not {"R3*", "R4", "R4*", "R5"} & set(pres_i.rule_counts())
    ok &= set(ri.symbols) == {"inv:i"} | {f"tau:{l}:{s}" for l in ("i", "i^-1") for s in "cde"}
    ok &= set(rc.symbols) == {"inv:c", "tau:c:e", "tau:c^-1:e"}
    for p in (pres_i, ri, rc, build_Rx(G, "a"), build_Rx(G, "c")):
        ok &= p.failures() == []
    ok &= emit_presentation(G).failures() == []
    report(6, "Omega_i, families for i and the reduced generators for i and c", ok)


def acceptance_graphs():
    graphs = dict(small_graphs())
    rng = random.Random(2024)
    for k in range(20):
        graphs[f"random{k}"] = random_graph(rng, 6)
    return graphs


def free_reps(g):
    seen, out = set(), []
    for v in g.vertices:
        info = class_partition(g, v)
        if not info.abelian and info.members not in seen:
            seen.add(info.members)
            out.append(v)
    return out


def test_c07_relation_soundness(report):
    checked = bad = 0
    for name, g in acceptance_graphs().items():
        for x in free_reps(g):
            pres = build_Rx(g, x, verify=False)
            checked += len(pres.relators)
            # the class generators are the only ones moved by Omega_x
            bad += len(fast_failures(pres))
            if len(pres.relators) < 5000:
                bad += len(pres.failures())
    report(7, "every relator verifies on every test graph and free class", bad == 0,
           f"{checked} relators, {bad} failures")


def test_c08_tower_round_trip(report):
    failures = total = 0
    for name, g in acceptance_graphs().items():
        rng = random.Random(name)
        gens = inv_tr(g)
        lat = build_lattice(g)
        for _ in range(100):
            phi = compose_to_map(g, [(rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(0, 6))])
            total += 1
            if not (is_in_stK(g, phi) and tower_factorize(g, phi, lat).recompose() == phi):
                failures += 1
    report(8, "tower factorisation recomposes", failures == 0, f"{total} products")


def test_c09_word_engine_oracle(report):
    rng = random.Random(9)
    subs = list(itertools.combinations(G.vertices, 5))
    rng.shuffle(subs)
    mismatches = words = 0
    for names in subs[:4]:
        sub = G.subgraph(names)
        near = ball(sub, 5)
        for _ in range(2500):
            word = random_word(rng, sub, 8)
            words += 1
            mismatches += len(normal_form(sub, word)) != bfs_length(sub, word, near, 3)
    conj = 0
    for k in range(1000):
        sub = G.subgraph(subs[k % 8])
        word = random_word(rng, sub, 6)
        geo = lambda u: heap_length(heap_of(sub, u))
        conj += conjugacy_length(sub, word) != brute_conjugacy_length(sub, word, 3, geo)
    report(9, "geodesic and conjugacy lengths against brute force", mismatches == 0 and conj == 0,
           f"{words} words, {mismatches} + {conj} mismatches")


def test_c10_peak_reduction(report):
    census = Counter()
    bad = 0
    rng = random.Random(10)
    for g, x in ((G, "a"), (small_graphs()["null2"], "x1")):
        ctx, C = OmegaContext(g, x), build_C2(g, x)
        for _ in range(500):
            w = [rng.choice(ctx.om.members) for _ in range(rng.randint(0, 6))]
            out, traces = peak_reduce(ctx, w, C)
            bad += not (is_peak_reduced(out, C) and ctx.compose(out) == ctx.compose(w))
            census.update(t.label for t in traces)
    # case 2 needs commuting multipliers, which neither corpus has; the class of i supplies it
    ctx, C = OmegaContext(G, "i"), build_C2(G, "i")
    forced = Counter()
    for al, be in itertools.product(ctx.om.members, repeat=2):
        if (not al.is_type1 and not be.is_type1 and ctx.adjacent(al.a, be.a)
                and is_peak(ctx.partner(al), be, C)):
            forced[lower_peak(ctx, al, be, C)[1].label] += 1
    labels = set(census) | set(forced)
    ok = bad == 0 and labels == set(CASE_LABELS)
    report(10, "peak reduction on class a and the rank-two free group", ok,
           f"{sum(census.values())} lowerings, forced: {sorted(forced)}")


def test_c11_word_problem(report):
    failures = certified = rejected = 0
    rng = random.Random(11)
    contexts = [OmegaContext(G, x) for x in "aci"] + [OmegaContext(small_graphs()["null2"], "x1")]
    for ctx in contexts:
        for _ in range(40):
            res = word_problem(ctx, relator_product(rng, ctx))
            ok = res.is_identity and replay(ctx, res.certificate)
            failures += not ok
            certified += ok
    while rejected < 200:
        ctx = rng.choice(contexts)
        w = [rng.choice(ctx.om.members) for _ in range(rng.randint(1, 6))]
        if ctx.compose(w).is_identity:
            continue
        res = word_problem(ctx, [(m, 1) for m in w])
        failures += res.is_identity or res.not_identity is None
        rejected += 1
    report(11, "relator products certified and replayed, non-identities rejected", failures == 0,
           f"{certified} certified, {rejected} rejected")


def test_c12_relator_set_fidelity(report):
    ri = tietze_reduce(build_Rx(G, "i"))
    rc = tietze_reduce(build_Rx(G, "c"))
    got_i = Counter(canon(r.word) for r in ri.relators)
    got_c = Counter(canon(r.word) for r in rc.relators)
    ok = set(got_i) == set(expected_i_relators()) and sum(got_i.values()) == 17
    ok &= set(got_c) == set(expected_c_relators()) and sum(got_c.values()) == 3
    ok &= ri.to_text() == tietze_reduce(build_Rx(G, "i")).to_text()
    ri.verify()
    rc.verify()
    report(12, "reduced relator sets for the classes of i and c", ok,
           f"{sum(got_i.values())} and {sum(got_c.values())} relators")
