from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from algebroidkit import catalog
from algebroidkit.algebroid import LieAlgebroid, lie_algebra
from algebroidkit.calculus import generating_from_divergence
from algebroidkit.coeffring import PolyRing
from algebroidkit.metricconn import (
    Connection,
    FiberMetric,
    SingularMetric,
    connection_generating,
    covariant_derivative,
    curvature,
    curvature_identity_check,
    divergence_from_connection,
    divergence_from_metric_volume,
    levi_civita,
    metricity_residuals,
    torsion_residuals,
)
from algebroidkit.randoms import random_multivector, random_poly, rng_for


METRIC_CASES = {
    "aff1": (catalog.aff1(), None),
    "heisenberg3": (catalog.heisenberg3(), None),
    "sl2": (catalog.sl2(), None),
    "r3": (catalog.r3(), None),
    "tangent2": (catalog.tangent2(), None),
    "aff1_action": (catalog.aff1_action(), None),
    "aff1_action_skew": (catalog.aff1_action(), [["x^2 + 1", "x"], ["x", 2]]),
    "sl2_weighted": (catalog.sl2(), [[2, 1, 0], [1, 1, 0], [0, 0, 3]]),
}


@pytest.fixture(params=sorted(METRIC_CASES))
def with_metric(request):
    E, g = METRIC_CASES[request.param]
    return E, g if g is not None else E.metric


def test_levi_civita_residuals_vanish(with_metric):
    E, g = with_metric
    C = levi_civita(E, g)
    assert torsion_residuals(E, C) == {}
    assert metricity_residuals(E, C, g) == {}


def test_connection_divergence_equals_metric_volume_divergence(with_metric):
    E, g = with_metric
    C = levi_civita(E, g)
    d_conn = divergence_from_connection(E, C)
    d_vol = divergence_from_metric_volume(E, g)
    assert d_conn == d_vol
    assert d_conn.cocycle_verified


def test_levi_civita_curvature_identities(with_metric):
    E, g = with_metric
    r = curvature_identity_check(E, levi_civita(E, g))
    assert r.operator_identity and r.ricci_symmetric and r.bianchi and r.torsion_free


def test_levi_civita_generating_operator_squares_to_zero(with_metric):
    E, g = with_metric
    C = levi_civita(E, g)
    div = divergence_from_connection(E, C)
    rng = rng_for(9)
    for _ in range(8):
        a = random_multivector(E, rng.randint(0, E.n), rng)
        once = generating_from_divergence(E, div, a)
        assert not generating_from_divergence(E, div, once)
        assert connection_generating(E, C, a) == once


def test_aff1_christoffel_symbols():
    # hand evaluation of the Koszul formula for [e1, e2] = e2, g = identity
    E = catalog.aff1()
    C = levi_civita(E, E.metric)
    assert C.christoffel(1, 1, 0) == -1
    assert C.christoffel(0, 1, 1) == 1
    assert C.christoffel(1, 0, 1) == 0
    assert C.christoffel(0, 0, 0) == 0
    assert divergence_from_connection(E, C).values == (-1, 0)


def test_tangent_metric_divergence_value():
    T = catalog.tangent2()
    div = divergence_from_metric_volume(T, T.metric)
    assert div.values == (T.ring("x") / T.ring("x^2 + 1"), 0)
    assert divergence_from_metric_volume(T, [[1, 0], [0, 1]]).values == (0, 0)


def test_constant_metric_on_abelian_is_flat():
    E = catalog.abelian(4)
    C = levi_civita(E, [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 5]])
    assert all(v == 0 for plane in C.gamma for row in plane for v in row)
    assert curvature(E, C).is_zero()


def test_rank_one_curvature_vanishes():
    E = LieAlgebroid(PolyRing(["x"]), ["e1"], [["x"]])
    C = Connection.from_christoffel(E.ring, 1, {(0, 0, 0): "x^2"})
    assert curvature(E, C).is_zero()


def test_covariant_derivative_leibniz():
    T = catalog.tangent2()
    C = levi_civita(T, T.metric)
    rng = rng_for(4)
    for _ in range(5):
        X, Y = random_multivector(T, 1, rng), random_multivector(T, 1, rng)
        f = random_poly(T.ring, rng)
        lhs = covariant_derivative(T, C, X, Y.scale(f))
        rhs = covariant_derivative(T, C, X, Y).scale(f) + Y.scale(sum(
            (X.coeff((i,)) * T.anchor_frame(i, f) for i in range(2)), T.ring.zero))
        assert lhs == rhs
        assert covariant_derivative(T, C, X.scale(f), Y) == covariant_derivative(T, C, X, Y).scale(f)


def test_singular_and_asymmetric_metrics_rejected():
    E = catalog.aff1()
    with pytest.raises(SingularMetric):
        levi_civita(E, [[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        FiberMetric(E.ring, [[1, 2], [0, 1]])


def abelian_with_anchor():
    R = PolyRing(["x"])
    return LieAlgebroid(R, ["e1", "e2", "e3"], [[1], [0], [0]], {})


def test_adversarial_asymmetric_ricci():
    # torsion-free, Gamma^1_12 = Gamma^1_21 = x with rho(e1) = d/dx
    E = abelian_with_anchor()
    C = Connection.from_christoffel(E.ring, 3, {(0, 0, 1): "x", (0, 1, 0): "x"})
    r = curvature_identity_check(E, C)
    assert r.torsion_free
    assert not r.operator_identity
    assert not (r.ricci_symmetric and r.bianchi)
    assert r.equivalence


def test_adversarial_shifted_levi_civita():
    # aff(1) + R with half-bracket symbols plus Gamma^3_23 = Gamma^3_32 = 1
    E = lie_algebra(3, {(0, 1): [0, 1, 0]})
    symbols = {(k, i, j): E.structure(k, i, j) * Fraction(1, 2)
               for i in range(3) for j in range(3) for k in range(3) if E.structure(k, i, j)}
    symbols[(2, 1, 2)] = 1
    symbols[(2, 2, 1)] = 1
    C = Connection.from_christoffel(E.ring, 3, symbols)
    r = curvature_identity_check(E, C)
    assert r.torsion_free
    assert not r.operator_identity
    assert not (r.ricci_symmetric and r.bianchi)
    assert r.equivalence


symbol = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))


@given(st.dictionaries(symbol, st.integers(-2, 2), min_size=1, max_size=4), st.booleans(),
       st.sampled_from(["abelian", "aff1+R", "heisenberg"]))
@settings(max_examples=120)
def test_operator_identity_iff_ricci_and_bianchi(symbols, symmetrize, which):
    E = {"abelian": lie_algebra(3, {}), "aff1+R": lie_algebra(3, {(0, 1): [0, 1, 0]}),
         "heisenberg": catalog.heisenberg3()}[which]
    if symmetrize:
        sym = {}
        for (k, i, j), v in symbols.items():
            sym[(k, i, j)] = sym[(k, j, i)] = Fraction(v)
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    c = E.structure(k, i, j)
                    if c:
                        sym[(k, i, j)] = sym.get((k, i, j), 0) + c * Fraction(1, 2)
        symbols = sym
    C = Connection.from_christoffel(E.ring, 3, symbols)
    r = curvature_identity_check(E, C)
    assert r.equivalence
    if symmetrize:
        assert r.torsion_free


def test_rank_four_adversarial():
    E = LieAlgebroid(PolyRing(["x"]), ["e1", "e2", "e3", "e4"], [[1], [0], [0], [0]], {})
    C = Connection.from_christoffel(E.ring, 4, {(0, 0, 1): "x", (0, 1, 0): "x", (3, 2, 3): 1, (3, 3, 2): 1})
    r = curvature_identity_check(E, C)
    assert r.torsion_free and not r.operator_identity and r.equivalence
