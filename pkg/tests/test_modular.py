import pytest

from algebroidkit import catalog
from algebroidkit.algebroid import LieAlgebroid, bracket_sections, change_frame, tangent_algebroid
from algebroidkit.calculus import de_rham, divergence_from_odd_volume
from algebroidkit.coeffring import PolyRing
from algebroidkit.exterior import OddVolume
from algebroidkit.modular import (
    ChartMismatch,
    Morphism,
    anchor_morphism,
    composition_check,
    coordinate_divergence,
    exactness,
    identity_morphism,
    modular_of_morphism,
    modular_representative,
    modular_via_divergences,
    modular_via_lie_derivatives,
    pullback_divergence,
    pullback_form,
    validate_morphism,
    zero_morphism,
)

from conftest import LIE_ALGEBRAS, VALID


def test_three_routes_agree(algebroid):
    E = algebroid
    phi = modular_representative(E)
    assert modular_via_divergences(E) == phi
    assert modular_via_lie_derivatives(E) == phi
    assert not de_rham(E, phi)


def test_known_representatives():
    E = catalog.aff1()
    assert modular_representative(E) == E.parse_form("a1")
    assert not modular_representative(catalog.sl2())
    assert not modular_representative(catalog.tangent2())
    assert not modular_representative(tangent_algebroid(["u", "v", "w"]))


def test_lie_algebra_representative_is_trace_of_adjoint(lie_alg):
    E = lie_alg
    phi = modular_representative(E)
    for i in range(E.n):
        X = E.frame_vector(i)
        trace = sum((bracket_sections(E, X, E.frame_vector(k)).coeff((k,)) for k in range(E.n)),
                    E.ring.zero)
        assert phi.coeff((i,)) == trace


def test_morphism_validation():
    for E in VALID.values():
        assert validate_morphism(identity_morphism(E)).ok
        assert validate_morphism(anchor_morphism(E)).ok
    A = catalog.aff1()
    assert validate_morphism(zero_morphism(A, A)).ok
    T = catalog.tangent2()
    r = validate_morphism(zero_morphism(T, T))
    assert not r.ok and set(r.anchor) == {0, 1}
    # X2 -> 2 X2 is an automorphism of aff(1); X1 -> 2 X1 is not
    assert validate_morphism(Morphism(A, A, ((1, 0), (0, 2)))).ok
    assert validate_morphism(Morphism(A, A, ((2, 0), (0, 1)))).bracket
    with pytest.raises(ChartMismatch):
        Morphism(A, T, ((0, 0), (0, 0)))


def test_pullback_divergence_examples():
    A = catalog.aff1()
    d = coordinate_divergence(A)
    assert pullback_divergence(identity_morphism(A), d) == d
    point = anchor_morphism(A)
    assert point.target.n == 0
    assert pullback_divergence(point, coordinate_divergence(point.target)).values == (0, 0)
    T = catalog.tangent2()
    weighted = divergence_from_odd_volume(T, OddVolume(T.ring("x^2 + 1")))
    assert pullback_divergence(anchor_morphism(T), weighted) == weighted


def test_modular_of_morphism_examples():
    A = catalog.aff1()
    d = coordinate_divergence(A)
    assert not modular_of_morphism(identity_morphism(A), d, d)
    k = anchor_morphism(A)
    assert modular_of_morphism(k, d, coordinate_divergence(k.target)) == A.parse_form("a1")
    T = catalog.tangent2()
    k = anchor_morphism(T)
    assert not modular_of_morphism(k, coordinate_divergence(T), coordinate_divergence(k.target))


def _composition(kappa):
    T = tangent_algebroid(kappa.source.ring)
    return composition_check(kappa, coordinate_divergence(kappa.source),
                             coordinate_divergence(kappa.target), coordinate_divergence(T))


def test_composition_identity(algebroid):
    E = algebroid
    for kappa in (identity_morphism(E), anchor_morphism(E)):
        r = _composition(kappa)
        assert r.ok
    r = _composition(anchor_morphism(E))
    assert r.eta_kappa == r.eta_source and not r.eta_target


def test_composition_for_zero_and_frame_change():
    for E in LIE_ALGEBRAS.values():
        r = _composition(zero_morphism(E, E))
        assert r.ok
        # the pullback along zero vanishes, so eta_kappa carries the whole class
        assert not r.pulled_target
        assert r.eta_kappa == modular_representative(E)
    S = catalog.sl2()
    A = [[1, 1, 0], [0, 1, 0], [0, 2, 1]]
    F = change_frame(S, A)
    kappa = Morphism(F, S, A)
    assert validate_morphism(kappa).ok
    assert _composition(kappa).ok
    T = catalog.aff1_action()
    G = change_frame(T, [[1, "x"], [0, 1]])
    kappa = Morphism(G, T, [[1, "x"], [0, 1]])
    assert validate_morphism(kappa).ok
    r = _composition(kappa)
    assert r.ok


def test_pullback_of_forms_is_multiplicative():
    S = catalog.sl2()
    A = [[1, 1, 0], [0, 1, 0], [0, 2, 1]]
    kappa = Morphism(change_frame(S, A), S, A)
    a = S.parse_form("a1 + 2*a3")
    b = S.parse_form("a2")
    from algebroidkit.exterior import wedge
    assert pullback_form(kappa, wedge(a, b)) == wedge(pullback_form(kappa, a), pullback_form(kappa, b))


@pytest.mark.parametrize("name", ["tangent2", "aff1_action"])
def test_volume_rescale_changes_representative_by_log_derivative(name):
    E = catalog.builders()[name]()
    F = E.ring("x^2 + 1")
    dlog = E.function_differential(F).map_coeffs(lambda c: c / F)
    base = modular_via_divergences(E)
    mu = OddVolume(E.ring.one).scaled(F)
    assert modular_via_divergences(E, mu_E=mu) - base == -dlog
    assert modular_via_divergences(E, mu_M=mu) - base == dlog
    assert modular_via_lie_derivatives(E, mu_E=mu) - base == -dlog
    assert modular_via_lie_derivatives(E, mu_M=mu) - base == dlog
    assert not de_rham(E, dlog)


def test_half_determinant_volumes_agree_across_routes():
    T = catalog.tangent2()
    g = OddVolume(T.ring.one, T.ring("x^2 + 1"))
    assert modular_via_divergences(T, mu_E=g) == modular_via_lie_derivatives(T, mu_E=g)
    assert modular_via_divergences(T, mu_M=g) == modular_via_lie_derivatives(T, mu_M=g)


def test_exactness_search():
    A = catalog.aff1()
    assert exactness(A, modular_representative(A)).status == "nontrivial"
    assert exactness(A, A.form()).trivial
    T = catalog.tangent2()
    r = exactness(T, T.parse_form("2*x*dx + y*dy"), degree_bound=2)
    assert r.trivial
    assert T.function_differential(r.primitive) == T.parse_form("2*x*dx + y*dy")
    assert exactness(T, T.parse_form("x^3*dx"), degree_bound=3).status == "undecided at degree bound 3"
    assert exactness(T, T.parse_form("x^3*dx"), degree_bound=4).trivial
    F = T.ring("x^2 + 1")
    dlog = T.function_differential(F).map_coeffs(lambda c: c / F)
    assert exactness(T, dlog).status.startswith("undecided")


def test_rank_zero_base():
    E = LieAlgebroid(PolyRing(["x"]), [], [])
    assert not modular_representative(E)
    assert not modular_via_lie_derivatives(E)
