from fractions import Fraction

from algebroidkit import catalog
from algebroidkit.algebroid import schouten
from algebroidkit.calculus import (
    Divergence,
    check_cocycle,
    de_rham,
    deformed_generating,
    deformed_generating_conjugated,
    divergence_difference,
    divergence_from_odd_volume,
    divergence_of,
    generating_from_divergence,
    generating_from_odd_volume,
    lie_derivative_form,
    witten_differential,
)
from algebroidkit.exterior import OddVolume, contract_form, wedge
from algebroidkit.modular import modular_representative
from algebroidkit.randoms import random_form, random_multivector, random_poly, rng_for


def sign(k):
    return -1 if k % 2 else 1


def pairs(E, rng, count):
    for _ in range(count):
        p = rng.randint(0, E.n)
        q = rng.randint(0, E.n - p)
        yield p, random_multivector(E, p, rng), q, random_multivector(E, q, rng)


def test_de_rham_examples():
    E = catalog.aff1()
    assert not de_rham(E, E.parse_form("a1"))
    assert de_rham(E, E.parse_form("a2")) == E.parse_form("-a1/\\a2")
    T = catalog.tangent2()
    assert de_rham(T, T.scalar_form(T.ring("x^2*y"))) == T.parse_form("2*x*y*dx + x^2*dy")


def test_d_squared_zero(algebroid):
    rng = rng_for(1)
    for _ in range(25):
        w = random_form(algebroid, rng.randint(0, algebroid.n), rng)
        assert not de_rham(algebroid, de_rham(algebroid, w))


def test_cartan_identities_on_sections(algebroid):
    E = algebroid
    rng = rng_for(2)
    for _ in range(8):
        X, Y = random_multivector(E, 1, rng), random_multivector(E, 1, rng)
        w = random_form(E, rng.randint(0, E.n), rng)
        L = lambda Z, f: lie_derivative_form(E, Z, f)
        assert L(X, w) == contract_form(X, de_rham(E, w)) + de_rham(E, contract_form(X, w))
        assert de_rham(E, L(X, w)) == L(X, de_rham(E, w))
        assert L(X, contract_form(Y, w)) - contract_form(Y, L(X, w)) == contract_form(schouten(E, X, Y), w)
        assert L(X, L(Y, w)) - L(Y, L(X, w)) == L(schouten(E, X, Y), w)


def test_bracket_contraction_identity(algebroid):
    # i_[a,b] = (-1)^|a| (-L_{a/\b} + i_b L_a + (-1)^{|a||b|} i_a L_b)
    E = algebroid
    rng = rng_for(3)
    L = lambda c, w: lie_derivative_form(E, c, w)
    for p, a, q, b in pairs(E, rng, 12):
        w = random_form(E, rng.randint(0, E.n), rng)
        rhs = (-L(wedge(a, b), w) + contract_form(b, L(a, w))
               + contract_form(a, L(b, w)).scale(sign(p * q))).scale(sign(p))
        assert contract_form(schouten(E, a, b), w) == rhs


def test_coordinate_volume_divergences():
    E = catalog.aff1()
    div = divergence_from_odd_volume(E, OddVolume(E.ring.one))
    assert div.values == (-1, 0)
    assert div.cocycle_verified
    assert divergence_from_odd_volume(catalog.sl2(), OddVolume(catalog.sl2().ring.one)).values == (0, 0, 0)
    T = catalog.tangent2()
    assert divergence_from_odd_volume(T, OddVolume(T.ring.one)).values == (0, 0)


def test_divergence_is_lie_derivative_of_volume(algebroid):
    # L_X mu = div(X) mu for arbitrary sections, not just the frame
    E = algebroid
    rng = rng_for(4)
    s = E.ring("x^2 + 1") if "x" in E.ring.names else E.ring(3)
    mu = OddVolume(s)
    div = divergence_from_odd_volume(E, mu)
    top = mu.top_form(E.n)
    full = tuple(range(E.n))
    for _ in range(8):
        X = random_multivector(E, 1, rng)
        assert lie_derivative_form(E, X, top).coeff(full) == divergence_of(E, div, X) * s


def test_volume_rescale_shifts_by_log_derivative(algebroid):
    E = algebroid
    rng = rng_for(5)
    mu = OddVolume(E.ring.one)
    F = random_poly(E.ring, rng) + 5
    d1 = divergence_from_odd_volume(E, mu)
    d2 = divergence_from_odd_volume(E, mu.scaled(F))
    for i in range(E.n):
        assert d2.values[i] - d1.values[i] == E.anchor_frame(i, F) / F
    phi = divergence_difference(E, d2, d1)
    assert not de_rham(E, phi)


def test_determinant_factor_counts_half():
    T = catalog.tangent2()
    D = T.ring("x^2 + 1")
    div = divergence_from_odd_volume(T, OddVolume(T.ring.one, D))
    assert div.values == (T.ring("x") / D, 0)
    # sqrt(D)^2 = D, so the square-volume has twice the shift
    assert divergence_from_odd_volume(T, OddVolume(D)).values == (2 * T.ring("x") / D, 0)


def test_generating_identity_and_routes(algebroid):
    E = algebroid
    rng = rng_for(6)
    mu = OddVolume(E.ring.one)
    div = divergence_from_odd_volume(E, mu)
    g = lambda x: generating_from_divergence(E, div, x)
    for p, a, q, b in pairs(E, rng, 25):
        s = sign(p)
        rhs = (g(wedge(a, b)) - wedge(g(a), b) - wedge(a, g(b)).scale(s)).scale(s)
        assert schouten(E, a, b) == rhs
        assert generating_from_odd_volume(E, mu, a) == g(a)
        assert not g(g(a))


def test_generating_on_sections_is_minus_divergence():
    E = catalog.aff1()
    div = divergence_from_odd_volume(E, OddVolume(E.ring.one))
    assert generating_from_divergence(E, div, E.frame_vector(0)) == E.scalar_multivector(1)
    assert not generating_from_divergence(E, div, E.frame_vector(1))
    assert not generating_from_divergence(E, div, E.parse_multivector("e1/\\e2"))


def test_non_cocycle_divergence_fails_to_square_to_zero():
    E = catalog.aff1()
    bad = Divergence((E.ring.zero, E.ring.one))
    report = check_cocycle(E, bad)
    assert not report.ok
    a = E.parse_multivector("e1/\\e2")
    g = lambda x: generating_from_divergence(E, bad, x)
    assert g(g(a))


def test_witten_deformation(algebroid):
    E = algebroid
    phi = modular_representative(E)
    mu = OddVolume(E.ring.one)
    rng = rng_for(7)
    for _ in range(10):
        k = rng.randint(0, E.n)
        w = random_form(E, k, rng)
        assert not witten_differential(E, phi, witten_differential(E, phi, w))
        a = random_multivector(E, k, rng)
        once = deformed_generating(E, mu, phi, a)
        assert once == deformed_generating_conjugated(E, mu, phi, a)
        assert not deformed_generating(E, mu, phi, once)


def test_divergence_values_are_exact_fractions():
    E = catalog.r3(Fraction(2, 3))
    div = divergence_from_odd_volume(E, OddVolume(E.ring.one))
    assert div.values[0] == Fraction(-5, 3)
