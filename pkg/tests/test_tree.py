import random
from fractions import Fraction

import pytest

from edgespec.errors import (
    DomainTooSmall,
    InconsistentInput,
    NotClosed,
    NotPruned,
    NotReduced,
    RadiusTooSmall,
    TooDeep,
    ZeroParameter,
)
from edgespec.generators import complete, cycle, petersen, with_pendant
from edgespec.spectral import edge_eigenspace, spanning_tree_basis
from edgespec.tree import (
    BoundaryMeasure,
    apply_deck,
    ball_edge_laplacian,
    boundary_value,
    build_ball,
    deck_image_class,
    deck_transform,
    edge_poisson,
    extend_eigenfunction,
    fundamental_loops,
    gamma_invariance_check,
    horocycle_bracket,
    horocycle_check,
    lift_edge_function,
    phi_rescale,
    poisson_suite,
    psi_rescale,
    reduce_walk,
    regular_ball,
    vertex_poisson,
)

from oracles import brute_edge_poisson, brute_vertex_poisson, closed_form_inward, gamma_invariance_oracle

K4, C3, C4 = complete(4), cycle(3), cycle(4)


def rand_measure(ball, seed):
    rng = random.Random(seed)
    return BoundaryMeasure(ball, [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(ball.num_frontier)])


@pytest.mark.parametrize("g, r, n", [(K4, 3, 22), (C3, 4, 9), (C4, 2, 5)])
def test_ball_sizes(g, r, n):
    b = build_ball(g, 0, r)
    assert b.num_vertices == n
    assert b.num_vertices == len(list(b.edges)) // 2 + 1


def test_ball_local_isomorphism():
    g = petersen()
    b = build_ball(g, 0, 4)
    for v in b.interior_vertices():
        images = sorted(b.tau(e) for e in b.out_edges(v))
        assert sorted(b.project_v(u) for u in images) == sorted(g.neighbors(b.project_v(v)))
    for e in b.edges:
        s = b.project_e(e)
        assert g.iota[s] == b.project_v(b.iota(e)) and g.tau[s] == b.project_v(b.tau(e))


def test_frontier_ranges_partition():
    b = build_ball(K4, 0, 4)
    assert [b.lo[c] for c in b.children[0]] == [0, 8, 16]
    assert b.hi[0] == b.num_frontier == 24


def test_ball_errors():
    with pytest.raises(NotPruned):
        build_ball(with_pendant(C3, [1]), 0, 3)
    with pytest.raises(RadiusTooSmall):
        build_ball(K4, 0, 1)


def test_bracket_examples():
    b = build_ball(K4, 0, 4)
    x1 = b.children[0][0]
    assert all(horocycle_bracket(b, 0, w) == 0 for w in range(b.num_frontier))
    assert all(horocycle_bracket(b, x1, w) == (1 if b.lo[x1] <= w < b.hi[x1] else -1) for w in range(b.num_frontier))
    with pytest.raises(TooDeep):
        horocycle_bracket(b, b.frontier_vertex(0), 0)


@pytest.mark.parametrize("g", [K4, C3, petersen()])
@pytest.mark.parametrize("z", [Fraction(3, 5), Fraction(-2), Fraction(1)])
def test_poisson_matches_brute_force(g, z):
    b = build_ball(g, 0, 4)
    mu = rand_measure(b, 1)
    assert vertex_poisson(b, mu, z) == brute_vertex_poisson(b, mu, z)
    assert edge_poisson(b, mu, z) == brute_edge_poisson(b, mu, z)
    assert vertex_poisson(b, mu, z, method="direct") == brute_vertex_poisson(b, mu, z)
    assert edge_poisson(b, mu, z, method="direct") == brute_edge_poisson(b, mu, z)


def test_poisson_examples():
    b = build_ball(K4, 0, 5)
    x1 = b.children[0][0]
    delta = BoundaryMeasure(b, [1 if w == b.lo[x1] else 0 for w in range(b.num_frontier)])
    z = Fraction(3, 5)
    p = vertex_poisson(b, delta, z)
    pe = edge_poisson(b, delta, z)
    assert p[0] == 1 and p[x1] == z
    assert pe[2 * x1] == 1 and pe[2 * b.children[0][1]] == 0
    uniform = BoundaryMeasure(b, [Fraction(1, b.num_frontier)] * b.num_frontier)
    assert set(vertex_poisson(b, uniform, 1).values()) == {1}
    mu = rand_measure(b, 2)
    pe = edge_poisson(b, mu, z)
    for v in range(1, b.num_vertices):
        assert pe[2 * v] == z ** (b.depth[v] - 1) * mu.of_edge(2 * v)
    with pytest.raises(ZeroParameter):
        vertex_poisson(b, mu, 0)


def test_measure_additivity():
    b = build_ball(K4, 0, 4)
    mu = rand_measure(b, 3)
    for v in b.interior_vertices():
        if v:
            assert mu.of_edge(2 * v) + mu.of_edge(2 * v + 1) == mu.total
        assert mu.below(v) == sum((mu.below(c) for c in b.children[v]), Fraction(0))


def test_measure_json_round_trip():
    b = build_ball(C4, 0, 5)
    mu = rand_measure(b, 4)
    assert BoundaryMeasure.from_json(b, mu.to_json()).values == mu.values
    with pytest.raises(InconsistentInput):
        BoundaryMeasure.from_json(b, {"nowhere": "1"})


@pytest.mark.parametrize("z", [Fraction(3, 5), Fraction(-2), Fraction(1), Fraction(-1)])
def test_boundary_round_trip_and_rescaling(z):
    b = build_ball(K4, 0, 5)
    mu = rand_measure(b, 5)
    pe = edge_poisson(b, mu, z)
    assert boundary_value(b, pe, z).values == mu.values
    outward = {e: v for e, v in pe.items() if e % 2 == 0}
    pe1 = edge_poisson(b, mu, 1)
    assert phi_rescale(b, outward, z) == {e: pe1[e] for e in outward}
    assert psi_rescale(b, phi_rescale(b, outward, z), z) == outward
    assert phi_rescale(b, outward, 1) == outward
    with pytest.raises(InconsistentInput):
        phi_rescale(b, {3: 1}, z)


@pytest.mark.parametrize("z", [Fraction(3, 5), Fraction(-2), Fraction(1), Fraction(7, 3)])
def test_extension_matches_closed_form(z):
    b = build_ball(K4, 0, 5)
    mu = rand_measure(b, 6)
    pe = edge_poisson(b, mu, z)
    outward = {e: v for e, v in pe.items() if e % 2 == 0}
    full = extend_eigenfunction(b, outward, z)
    for e in full:
        if e % 2:
            assert full[e] == closed_form_inward(b, outward, z, e)
    assert all(full[e] == pe[e] for e in pe)
    lap = ball_edge_laplacian(b, full)
    assert lap and all(lap[e] == z * full[e] for e in lap)


def test_extension_z1_constant_vertex_sums():
    b = build_ball(K4, 0, 4)
    full = extend_eigenfunction(b, {e: v for e, v in edge_poisson(b, rand_measure(b, 7), 1).items() if e % 2 == 0}, 1)
    sums = set()
    for v in b.interior_vertices():
        s = sum(full[e] for e in b.out_edges(v))
        sums.add(s)
        for e in b.out_edges(v):
            assert full[e] + full[e ^ 1] == s
    assert len(sums) == 1


def test_extension_zero_and_inconsistent():
    b = build_ball(C4, 0, 4)
    zero = {2 * v: 0 for v in range(1, b.num_vertices)}
    assert set(extend_eigenfunction(b, zero, 2).values()) == {0}
    bad = dict(zero)
    bad[2] = 1
    with pytest.raises(InconsistentInput):
        extend_eigenfunction(b, bad, 2)


def test_lift():
    b = build_ball(C3, 0, 5)
    assert set(lift_edge_function(C3, b, [1] * 6).values()) == {1}
    b = build_ball(K4, 0, 4)
    for f in spanning_tree_basis(K4, 1):
        lf = lift_edge_function(K4, b, f)
        lap = ball_edge_laplacian(b, lf)
        assert all(lap[e] == lf[e] for e in lap)


@pytest.mark.parametrize("z", [Fraction(1), Fraction(-1)])
def test_lifted_eigenfunction_reproduced(z):
    for g in (K4, C4, petersen()):
        b = build_ball(g, 0, 5)
        for f in edge_eigenspace(g, z):
            lf = lift_edge_function(g, b, f)
            again = edge_poisson(b, boundary_value(b, lf, z), z)
            assert all(again[e] == lf[e] for e in again)


def test_deck_basics():
    with pytest.raises(NotClosed):
        deck_transform(C3, [0, 2])
    with pytest.raises(NotReduced):
        deck_transform(C3, [0, 1])
    b = build_ball(C3, 0, 8)
    ident = deck_transform(C3, [])
    assert all(apply_deck(ident, b, v) == v for v in range(b.num_vertices))
    gen = deck_transform(C3, [0, 2, 4])
    # On the line cover the generator translates by three steps.
    for v in range(b.num_vertices):
        img = apply_deck(gen, b, v)
        if img is not None and b.walk(v) and b.walk(v)[0] == 0:
            assert b.depth[img] == b.depth[v] + 3
    assert reduce_walk([0, 1, 2]) == (2,)


def test_deck_preserves_adjacency():
    b = build_ball(K4, 0, 5)
    for loop in fundamental_loops(K4, 0):
        dt = deck_transform(K4, loop)
        for v in range(1, b.num_vertices):
            gv, gp = apply_deck(dt, b, v), apply_deck(dt, b, b.parent[v])
            if gv is not None and gp is not None:
                assert b.parent[gv] == gp or b.parent[gp] == gv
                assert b.project_v(gv) == b.project_v(v)


@pytest.mark.parametrize("g", [C3, C4, K4])
def test_horocycle_identities(g):
    b = build_ball(g, 0, 8)
    for loop in fundamental_loops(g, 0):
        res = horocycle_check(deck_transform(g, loop), b, max_depth=3)
        assert all(r.passed and r.coverage > 0 for r in res.values())


def test_deck_image_class_inverse():
    b = build_ball(K4, 0, 6)
    dt = deck_transform(K4, fundamental_loops(K4, 0)[0])
    inv = dt.inverse()
    for w in range(b.num_frontier):
        gw = deck_image_class(dt, b, w)
        if gw is not None:
            back = deck_image_class(inv, b, gw)
            assert back is None or back == w


@pytest.mark.parametrize(
    "g, z, radius",
    [(C3, 1, 8), (C4, -1, 8), (C4, 1, 8), (K4, 1, 5), (K4, -1, 5), (petersen(), 1, 7)],
)
def test_gamma_invariance_against_oracle(g, z, radius):
    basis = edge_eigenspace(g, z)
    assert basis
    for loop in fundamental_loops(g, 0)[:2]:
        dt = deck_transform(g, loop)
        b = build_ball(g, 0, radius)
        big = build_ball(g, 0, radius + len(loop))
        for f in basis:
            res = gamma_invariance_check(g, b, f, dt, z)
            assert res.passed and res.coverage > 0
            mu_big = boundary_value(big, lift_edge_function(g, big, f), z)
            checked, failures = gamma_invariance_oracle(g, big, mu_big, loop, Fraction(z), radius)
            assert checked > 0 and not failures


def test_gamma_invariance_detects_non_invariant():
    b = build_ball(K4, 0, 6)
    dt = deck_transform(K4, fundamental_loops(K4, 0)[0])
    f = [Fraction(e) for e in range(K4.num_dir_edges)]  # not an eigenfunction
    assert not gamma_invariance_check(K4, b, f, dt, 1).passed
    zero = [0] * K4.num_dir_edges
    assert gamma_invariance_check(K4, b, zero, dt, 1).passed


def test_gamma_invariance_small_radius():
    b = build_ball(petersen(), 0, 3)
    dt = deck_transform(petersen(), fundamental_loops(petersen(), 0)[0])
    with pytest.raises(DomainTooSmall):
        gamma_invariance_check(petersen(), b, [0] * 30, dt, 1)


@pytest.mark.parametrize("g", [K4, C3, C4, petersen()])
@pytest.mark.parametrize("z", [Fraction(1), Fraction(-1), Fraction(3, 5), Fraction(-2)])
def test_poisson_suite(g, z):
    b = build_ball(g, 0, 6)
    res = poisson_suite(g, b, rand_measure(b, 8), z, edge_eigenspace(g, z))
    for name, r in res.items():
        assert r.passed and r.coverage >= 10, name


def test_poisson_suite_detects_corruption():
    b = build_ball(K4, 0, 5)
    mu = rand_measure(b, 9)
    good = poisson_suite(K4, b, mu, Fraction(3, 5))
    assert all(good.values())
    from edgespec import tree

    original = tree.edge_poisson

    def broken(ball, m, z, method="fast"):
        out = original(ball, m, z, method)
        out[3] += 1  # an inward edge at the first child
        return out

    tree.edge_poisson = broken
    try:
        bad = poisson_suite(K4, b, mu, Fraction(3, 5))
    finally:
        tree.edge_poisson = original
    assert not bad["vertex sum"].passed and not bad["eigen-equation"].passed
    assert not bad["inward extension"].passed


def test_regular_ball():
    b = regular_ball(2, 3)
    assert b.num_vertices == 1 + 3 + 6 + 12
    assert b.path_string(b.frontier_vertex(0)) == "o/0/0/0"
