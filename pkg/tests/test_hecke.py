import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from edgespec.errors import BadSymbol, InsufficientMargin, MixedQ, ZeroParameter
from edgespec.hecke import (
    BasisWord,
    HeckeElement,
    _scaled_transforms,
    apply_op,
    delta_measure,
    elements_agree,
    golden_table,
    hecke_mul,
    hecke_reduce,
    hecke_to_matrix,
    k_type_dims,
    poisson_action_check,
    sigma_element,
    v1_operator_check,
    v1_projection_check,
    word_avatar_row,
)
from edgespec.tree import BoundaryMeasure, edge_poisson, regular_ball, vertex_poisson

words = st.text(alphabet="DX", min_size=0, max_size=7)
BALLS = {2: regular_ball(2, 7), 3: regular_ball(3, 6)}


def reduced_keys(max_len):
    out = {""}
    for m in range(1, max_len + 1):
        d = "D" * m
        out |= {d, d + "X", "X" + d, "X" + d + "X"}
    out.add("X")
    return out


def test_relation_examples():
    assert hecke_reduce(2, "DXD").coeffs == {"X": 2, "D": 1}
    assert str(hecke_reduce(2, "DXD")) == "2·X + 1·D"
    assert str(hecke_reduce(3, "DXDX")) == "3·Id + 2·DX"
    assert hecke_reduce(5, "XX") == HeckeElement.identity(5)
    assert hecke_reduce(3, "D") * sigma_element(3) == HeckeElement(3, {"D": 3, "X": 3})


def test_to_json():
    assert hecke_reduce(3, "DXDX").to_json() == {"Id": "3", "DX": "2"}


def test_basis_word_keys():
    for key in reduced_keys(5):
        bw = BasisWord.from_key(key)
        assert bw.key == key
        assert hecke_reduce(2, key).coeffs == {key: 1}


def test_errors():
    with pytest.raises(BadSymbol):
        hecke_reduce(2, "DYX")
    with pytest.raises(MixedQ):
        hecke_mul(hecke_reduce(2, "D"), hecke_reduce(3, "D"))
    b = regular_ball(2, 3)
    with pytest.raises(InsufficientMargin):
        hecke_to_matrix(hecke_reduce(2, "DDD"), b)
    with pytest.raises(InsufficientMargin):
        hecke_to_matrix({"D": 1}, b, margin=0)
    with pytest.raises(BadSymbol):
        word_avatar_row(b, "Q", 2)


@given(words, st.integers(2, 4))
def test_normal_forms_are_reduced(w, q):
    nf = hecke_reduce(q, w)
    assert all("XX" not in k and "DXD" not in k for k in nf.coeffs)
    assert all(k in reduced_keys(len(w)) for k in nf.coeffs)


@given(words, st.integers(2, 4), st.integers(0, 10**6))
def test_confluence_under_random_redex_order(w, q, seed):
    assert hecke_reduce(q, w, random.Random(seed)) == hecke_reduce(q, w)


@given(words, words, words, st.integers(2, 3))
def test_associativity(a, b, c, q):
    x, y, z = (hecke_reduce(q, t) for t in (a, b, c))
    assert hecke_mul(hecke_mul(x, y), z) == hecke_mul(x, hecke_mul(y, z))


@given(st.text(alphabet="DX", min_size=1, max_size=4), st.text(alphabet="DX", min_size=0, max_size=2), st.sampled_from([2, 3]))
def test_avatar_is_a_homomorphism(u, v, q):
    ball = BALLS[q]
    prod = hecke_mul(hecke_reduce(q, u), hecke_reduce(q, v))
    res = elements_agree({u + v: 1}, prod, ball)
    assert res.passed and res.coverage > 0


@pytest.mark.parametrize("q", [2, 3])
def test_generator_relations_as_matrices(q):
    ball = BALLS[q]
    assert elements_agree({"XX": 1}, {"": 1}, ball)
    assert elements_agree({"DXD": 1}, {"X": q, "D": q - 1}, ball)
    assert elements_agree({"S": 1}, sigma_element(q), ball)
    wrong = elements_agree({"DXD": 1}, {"X": q, "D": q}, ball)
    assert not wrong.passed and wrong.failures


def test_avatar_rows():
    b = regular_ball(2, 3)
    e = 2 * b.children[0][0]
    assert word_avatar_row(b, "X", e) == {e + 1: 1}
    row = word_avatar_row(b, "D", e)
    assert sorted(row) == sorted(2 * c for c in b.children[b.children[0][0]])
    m = hecke_to_matrix(HeckeElement(2, {"D": Fraction(1, 2)}), b)
    assert m[e] == {f: Fraction(1, 2) for f in row}


def test_scaled_transforms_are_a_multiple():
    b = regular_ball(3, 5)
    rng = random.Random(0)
    mu = BoundaryMeasure(b, [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(b.num_frontier)])
    for z in (Fraction(3, 5), Fraction(-2), Fraction(7, 3)):
        pe, pi = _scaled_transforms(b, mu, z)
        ref = edge_poisson(b, mu, z)
        p = vertex_poisson(b, mu, z)
        ratios = {Fraction(pe[e]) / ref[e] for e in ref if ref[e]}
        ratios |= {Fraction(pi[e]) / p[b.iota(e)] for e in pi if p[b.iota(e)]}
        assert len(ratios) == 1
        assert set(pe) == set(ref)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("z", [Fraction(3, 5), Fraction(-2), Fraction(7, 3)])
def test_action_identities_on_deltas(q, z):
    b = BALLS[q]
    for omega in (0, b.lo[b.children[0][1]]):
        mu = delta_measure(b, omega)
        for name, res in poisson_action_check(q, z, mu, b).items():
            assert res.passed and res.coverage > 0, name
        for name, res in v1_projection_check(q, z, mu, b).items():
            assert res.passed and res.coverage > 0, name


def test_action_check_detects_wrong_q():
    b = BALLS[2]
    res = poisson_action_check(3, Fraction(3, 5), delta_measure(b, 0), b)
    assert not res["D Pi = q z^-1 Pi + q (z - z^-1) Pe"].passed


def test_action_check_zero():
    with pytest.raises(ZeroParameter):
        poisson_action_check(2, 0, delta_measure(BALLS[2], 0), BALLS[2])


@pytest.mark.parametrize("q", [2, 3])
def test_golden_table(q):
    z = Fraction(3, 5)
    table = golden_table(q, z, BALLS[q])
    assert all(got == want for got, want in table.values())
    assert table["D Pi d- (e1)"][1] == q / z
    assert table["X Pe d- (e1)"][1] == 1 / z


def test_apply_op_partial_domain():
    b = regular_ball(2, 3)
    f = {e: 1 for e in b.edges}
    d = apply_op(b, "D", f)
    assert all(v == 2 for v in d.values())
    assert all(b.depth[b.tau(e)] < 3 for e in d)
    with pytest.raises(BadSymbol):
        apply_op(b, "Q", f)


@pytest.mark.parametrize("q", [2, 3])
def test_v1_operators(q):
    res = v1_operator_check(q, regular_ball(q, 7), n_max=4)
    assert {k for k in res if "recursion" in k} == {"X2 recursion", "X3 recursion", "X4 recursion"}
    assert all(r.passed and r.coverage > 0 for r in res.values())


@pytest.mark.parametrize("q, dims", [(2, [1, 2, 3, 6, 12, 24]), (3, [1, 3, 8, 24, 72, 216])])
def test_k_types(q, dims):
    assert [k_type_dims(q, i) for i in range(6)] == dims
