import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagstab.endomap import EndoMap
from raagstab.graph import class_partition
from raagstab.matrix import (determinant, gen_matrix, gl_presentation, gl_word, identity_matrix,
                             mat_inverse, mat_mul, word_matrix)
from raagstab.stabilizer import (MembershipError, class_restriction, express_in_omega_x,
                                 free_case_split, from_matrix, inv_tr, is_in_stK, lattice_of,
                                 level_restriction, matrix_coordinates, matrix_split,
                                 short_exponents, to_matrix, tower_factorize)
from raagstab.whitehead import compose_to_map, enumerate_family, parse_auto, transvection
from raagstab.words import parse_letter

from conftest import load_example, small_graphs

G = load_example()
LAT = lattice_of(G)
GENS = inv_tr(G)


def random_product(rng, g, gens, n):
    return compose_to_map(g, [(rng.choice(gens), rng.choice((1, -1))) for _ in range(n)])


def test_membership_examples():
    assert is_in_stK(G, parse_auto(G, "inv a").endo)
    assert is_in_stK(G, parse_auto(G, "tau i c").endo)
    assert not is_in_stK(G, parse_auto(G, "conj c").endo)


def test_membership_rejects_non_homomorphism():
    bad = EndoMap.from_names(G, {"a": (parse_letter(G, "a"), parse_letter(G, "i"))})
    with pytest.raises(MembershipError):
        is_in_stK(G, bad)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(GENS), st.sampled_from((1, -1))), max_size=6))
def test_tower_round_trip(fs):
    phi = compose_to_map(G, fs)
    assert is_in_stK(G, phi)
    tf = tower_factorize(G, phi, LAT)
    assert tf.recompose() == phi
    assert tf.residual.is_identity
    for k, factors in tf.per_level:
        for (_, u), (_, v) in itertools.combinations(factors, 2):
            assert u.then(v) == v.then(u)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(GENS), st.sampled_from((1, -1))), max_size=5),
       st.lists(st.tuples(st.sampled_from(GENS), st.sampled_from((1, -1))), max_size=5))
def test_level_restriction_is_a_retraction(f1, f2):
    phi, psi = compose_to_map(G, f1), compose_to_map(G, f2)
    for k in range(LAT.height_max + 1):
        r = level_restriction(G, phi, k, LAT)
        assert level_restriction(G, r, k, LAT) == r
        assert level_restriction(G, phi.then(psi), k, LAT) == r.then(level_restriction(G, psi, k, LAT))
    assert level_restriction(G, phi, LAT.height_max, LAT) == phi


def test_class_restriction_needs_level_support():
    with pytest.raises(MembershipError):
        class_restriction(G, parse_auto(G, "tau i c").endo, "a", LAT)


# -- abelian classes --

def test_matrix_model_of_class_f():
    assert matrix_coordinates(G, "f") == (("f", "g", "d", "e"), 2)
    m = to_matrix(G, "f", parse_auto(G, "tau f d").endo)
    assert m == ((1, 0, 1, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    a1 = lambda m: tuple(r[:2] for r in m[:2])
    assert a1(to_matrix(G, "f", parse_auto(G, "tau f g").endo)) == ((1, 1), (0, 1))
    assert a1(to_matrix(G, "f", parse_auto(G, "inv f").endo)) == ((-1, 0), (0, 1))


def test_matrix_rejects_free_class_and_foreign_support():
    with pytest.raises(MembershipError):
        matrix_coordinates(G, "a")
    with pytest.raises(MembershipError):
        to_matrix(G, "f", parse_auto(G, "inv e").endo)


def test_structure_flags():
    e = class_partition(G, "e")
    assert e.abelian and (e.q, e.p) == (2, 1)
    for v in "dh":
        info = class_partition(G, v)
        assert info.abelian and info.q == info.p == 1


def _class_f_gens():
    out = []
    for m in GENS:
        try:
            to_matrix(G, "f", m.endo)
        except MembershipError:
            continue
        out.append(m)
    return out


F_GENS = _class_f_gens()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(F_GENS), st.sampled_from((1, -1))), max_size=6),
       st.lists(st.tuples(st.sampled_from(F_GENS), st.sampled_from((1, -1))), max_size=6))
def test_matrix_model_is_multiplicative(f1, f2):
    phi, psi = compose_to_map(G, f1), compose_to_map(G, f2)
    mp, mq = to_matrix(G, "f", phi), to_matrix(G, "f", psi)
    assert to_matrix(G, "f", phi.then(psi)) == mat_mul(mp, mq)
    assert from_matrix(G, "f", mp) == phi
    md, mu = matrix_split(mp, 2)
    assert mat_mul(md, mu) == mp
    assert all(mu[i][i] == 1 for i in range(4)) and mu[1][0] == mu[0][1] == 0
    assert all(md[i][j] == 0 for i in range(2) for j in range(2, 4))


def random_gl(rng, n, steps=8):
    word = []
    for _ in range(steps):
        if rng.random() < 0.2:
            word.append((("O", rng.randrange(n)), 1))
        else:
            i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
            if i != j:
                word.append((("E", i, j), rng.choice((1, -1, 2, -2))))
    return word_matrix(word, n)


def test_theta_action_law():
    # conjugating the unipotent part by the block-diagonal part gives A1^-1 B
    rng = random.Random(7)
    s, r = 2, 4
    for _ in range(50):
        a1 = random_gl(rng, s)
        b = tuple(tuple(rng.randint(-3, 3) for _ in range(r - s)) for _ in range(s))
        md = tuple(tuple(a1[i][j] if i < s and j < s else int(i == j) for j in range(r)) for i in range(r))
        mu = tuple(tuple(b[i][j - s] if i < s and j >= s else int(i == j) for j in range(r)) for i in range(r))
        conj = mat_mul(mat_mul(mat_inverse(md), mu), md)
        expected_b = mat_mul(mat_inverse(a1), b)
        assert conj == tuple(tuple(expected_b[i][j - s] if i < s and j >= s else int(i == j)
                                   for j in range(r)) for i in range(r))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10 ** 6))
def test_gl_word_recovers_matrix(n, seed):
    m = random_gl(random.Random(seed), n, steps=10)
    assert abs(determinant(m)) == 1
    assert word_matrix(gl_word(m), n) == m


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gl_relators_hold(n):
    for word, _ in gl_presentation(n):
        assert word_matrix(word, n) == identity_matrix(n)
    assert gen_matrix(("O", 0), n)[0][0] == -1


# -- free classes --

def test_short_generators():
    def shorts(x):
        info = class_partition(G, x)
        return {(v, z) for v in info.members for z in info.short}

    assert shorts("a") == {("a", "d"), ("b", "d")}
    assert shorts("c") == {("c", "d")}
    assert shorts("i") == {("i", "h")}
    for x in "aci":
        for v, z in shorts(x):
            transvection(G, parse_letter(G, v), parse_letter(G, z))


def _class_gens(x):
    out = []
    for m in GENS:
        try:
            free_case_split(G, x, m.endo)
        except MembershipError:
            continue
        out.append(m)
    return out


A_GENS = _class_gens("a")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(A_GENS), st.sampled_from((1, -1))), max_size=6))
def test_free_case_split_and_omega_factorisation(fs):
    phi = compose_to_map(G, fs)
    phi_l, phi_s = free_case_split(G, "a", phi)
    assert phi_s.then(phi_l) == phi
    assert all(e == 0 for e in short_exponents(G, "a", phi_l).values())
    assert short_exponents(G, "a", phi_s) == short_exponents(G, "a", phi)
    word = express_in_omega_x(G, "a", phi_l)
    omega = set(enumerate_family(G, "omega", "a"))
    assert all(w in omega for w in word)
    assert compose_to_map(G, word) == phi_l


def test_short_part_is_normal():
    # conjugating a short transvection by a long generator stays short
    shorts = [parse_auto(G, "tau a d"), parse_auto(G, "tau b d")]
    for w in enumerate_family(G, "omega", "a"):
        for s in shorts:
            c = w.endo.inverse().then(s.endo).then(w.endo)
            phi_l, _ = free_case_split(G, "a", c)
            assert phi_l.is_identity


def test_express_rejects_short_part():
    with pytest.raises(MembershipError):
        express_in_omega_x(G, "a", parse_auto(G, "tau a d").endo)


@pytest.mark.parametrize("name", ["path4", "null3", "complete3"])
def test_tower_on_small_graphs(name):
    g = small_graphs()[name]
    rng = random.Random(name)
    gens = inv_tr(g)
    lat = lattice_of(g)
    for _ in range(20):
        phi = random_product(rng, g, gens, rng.randint(0, 6))
        assert is_in_stK(g, phi)
        assert tower_factorize(g, phi, lat).recompose() == phi
