"""Modular classes of base-preserving morphisms and of Lie algebroids.

Three independent routes to the modular 1-form of an algebroid E:

* pulled-back minus native divergence along the anchor E -> TM,
* Lie derivatives of the top multivector of E and the top form of TM,
* the local formula phi_i = sum_k c^k_ik + sum_a d rho^a_i / d u^a.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .algebroid import bracket_sections, schouten, tangent_algebroid
from .calculus import (
    Divergence,
    check_cocycle,
    de_rham,
    divergence_from_odd_volume,
    divergence_of,
    lie_derivative_form,
)
from .coeffring import Poly, partial
from .exterior import Form, Multivector, OddVolume, wedge
from .homology import NotClosed
from .linalg import solve_rational

__all__ = [
    "ChartMismatch",
    "NotClosed",
    "Morphism",
    "MorphismReport",
    "ExactnessReport",
    "CompositionReport",
    "validate_morphism",
    "identity_morphism",
    "anchor_morphism",
    "zero_morphism",
    "pullback_form",
    "pullback_divergence",
    "modular_of_morphism",
    "modular_representative",
    "modular_via_divergences",
    "modular_via_lie_derivatives",
    "composition_check",
    "exactness",
    "coordinate_divergence",
]


class ChartMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    """kappa(X^1_i) = sum_j matrix[j][i] X^2_j, covering the identity on the chart."""

    source: object
    target: object
    matrix: tuple

    def __post_init__(self):
        if self.source.ring.names != self.target.ring.names:
            raise ChartMismatch(
                f"charts differ: {list(self.source.ring.names)} vs {list(self.target.ring.names)}")
        ring = self.target.ring
        mat = tuple(tuple(ring(v) for v in row) for row in self.matrix)
        if len(mat) != self.target.n or any(len(row) != self.source.n for row in mat):
            raise ValueError(f"morphism matrix must be {self.target.n}x{self.source.n}")
        object.__setattr__(self, "matrix", mat)

    def apply(self, X):
        """Image of a section of the source."""
        E2 = self.target
        out = Multivector.zero(E2.ring, E2.n)
        for (i,), f in X.terms.items():
            for j in range(E2.n):
                c = self.matrix[j][i]
                if c:
                    out = out + E2.frame_vector(j, f * c)
        return out

    def image(self, i):
        return self.apply(self.source.frame_vector(i))


def identity_morphism(E):
    n = E.n
    return Morphism(E, E, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def anchor_morphism(E, tangent=None):
    """The anchor as a morphism into the tangent algebroid of the chart."""
    T = tangent if tangent is not None else tangent_algebroid(E.ring)
    return Morphism(E, T, tuple(tuple(E.anchor[i][a] for i in range(E.n)) for a in range(E.m)))


def zero_morphism(E1, E2):
    return Morphism(E1, E2, tuple(tuple(0 for _ in range(E1.n)) for _ in range(E2.n)))


@dataclass
class MorphismReport:
    anchor: dict
    bracket: dict

    @property
    def ok(self):
        return not self.anchor and not self.bracket

    def summary(self):
        return (f"anchor compatibility: {'OK' if not self.anchor else 'FAIL'}, "
                f"bracket compatibility: {'OK' if not self.bracket else 'FAIL'}")


def validate_morphism(kappa):
    """Residuals of rho1 = rho2 o kappa (per frame index) and of
    kappa[X_i, X_j] = [kappa X_i, kappa X_j] (per frame pair)."""
    E1, E2 = kappa.source, kappa.target
    anchor = {}
    for i in range(E1.n):
        r = tuple(E1.anchor[i][a] - sum((kappa.matrix[j][i] * E2.anchor[j][a] for j in range(E2.n)),
                                        E1.ring.zero)
                  for a in range(E1.m))
        if any(r):
            anchor[i] = r
    bracket = {}
    images = [kappa.image(i) for i in range(E1.n)]
    for i in range(E1.n):
        for j in range(i + 1, E1.n):
            r = kappa.apply(E1.frame_bracket(i, j)) - bracket_sections(E2, images[i], images[j])
            if r:
                bracket[(i, j)] = r
    return MorphismReport(anchor, bracket)


def pullback_form(kappa, omega):
    """kappa^* on forms: (kappa^* omega)(X_I) = omega(kappa X_I)."""
    E1, E2 = kappa.source, kappa.target
    pulled = [Form._make(E1.ring, E1.n, {(i,): c for i in range(E1.n) if (c := kappa.matrix[j][i])})
              for j in range(E2.n)]
    out = Form.zero(E1.ring, E1.n)
    for J, f in omega.terms.items():
        t = Form.scalar(E1.ring, E1.n, f)
        for j in J:
            t = wedge(t, pulled[j])
        out = out + t
    return out


def pullback_divergence(kappa, div2):
    """(kappa^* div2)(X_i) = div2(kappa X_i)."""
    E1 = kappa.source
    values = tuple(divergence_of(kappa.target, div2, kappa.image(i)) for i in range(E1.n))
    return Divergence(values, cocycle_verified=check_cocycle(E1, Divergence(values)).ok)


def modular_of_morphism(kappa, div1, div2):
    """The 1-form phi on the source with <phi, X> = (kappa^* div2)(X) - div1(X)."""
    E1 = kappa.source
    pulled = pullback_divergence(kappa, div2)
    return Form._make(E1.ring, E1.n, {(i,): v for i in range(E1.n)
                                      if (v := pulled.values[i] - div1.values[i])})


def coordinate_divergence(E):
    return divergence_from_odd_volume(E, OddVolume(E.ring.one))


def _assert_closed(E, phi):
    if de_rham(E, phi):
        raise NotClosed("modular form is not closed; is the algebroid valid?")
    return phi


def modular_representative(E):
    """phi_i = sum_k c^k_ik + sum_a d rho^a_i / d u^a, straight from the structure functions."""
    terms = {}
    for i in range(E.n):
        v = sum((E.structure(k, i, k) for k in range(E.n)), E.ring.zero)
        for a in range(E.m):
            v = v + partial(E.anchor[i][a], a)
        if v:
            terms[(i,)] = v
    return _assert_closed(E, Form._make(E.ring, E.n, terms))


def modular_via_divergences(E, mu_E=None, mu_M=None):
    """Pull back the tangent divergence along the anchor and subtract E's own."""
    kappa = anchor_morphism(E)
    div_E = divergence_from_odd_volume(E, mu_E or OddVolume(E.ring.one))
    div_M = divergence_from_odd_volume(kappa.target, mu_M or OddVolume(E.ring.one))
    return modular_of_morphism(kappa, div_E, div_M)


def _half_log_derivative(E, D, f_apply):
    if D is None:
        return E.ring.zero
    return f_apply(D) / D * Fraction(1, 2)


def modular_via_lie_derivatives(E, mu_E=None, mu_M=None):
    """phi(X) from L_X(a) (x) mu + a (x) L_{rho X} mu = phi(X) a (x) mu.

    Here a is the top multivector dual to mu_E, differentiated with the
    Schouten bracket, and mu is the top form mu_M of TM, differentiated with
    the tangent Cartan calculus.
    """
    ring = E.ring
    mu_E = mu_E or OddVolume(ring.one)
    mu_M = mu_M or OddVolume(ring.one)
    T = tangent_algebroid(ring)
    n, m = E.n, E.m
    top = tuple(range(n))
    s = mu_E.coeff
    # a = X_top / s (rational part); sqrt(D_E) contributes -(1/2) rho(X) D_E / D_E
    a = Multivector.basis(ring, n, top, ring.one / s)
    a_coeff = a.coeff(top)
    muM_top = mu_M.top_form(m)
    full_m = tuple(range(m))
    terms = {}
    for i in range(n):
        X = E.frame_vector(i)
        La = schouten(E, X, a)
        v = La.coeff(top) / a_coeff if La else ring.zero
        v = v - _half_log_derivative(E, mu_E.det_factor, lambda f: E.anchor_frame(i, f))
        rhoX = Multivector._make(ring, m, {(b,): c for b, c in enumerate(E.anchor[i]) if c})
        if rhoX:
            Lmu = lie_derivative_form(T, rhoX, muM_top)
            if Lmu:
                v = v + Lmu.coeff(full_m) / mu_M.coeff
            v = v + _half_log_derivative(E, mu_M.det_factor, lambda f: E.anchor_frame(i, f))
        if v:
            terms[(i,)] = v
    return Form._make(ring, n, terms)


@dataclass
class CompositionReport:
    eta_source: Form
    eta_kappa: Form
    eta_target: Form
    pulled_target: Form

    @property
    def residual(self):
        return self.eta_source - self.eta_kappa - self.pulled_target

    @property
    def ok(self):
        return not self.residual


def composition_check(kappa, div1, div2, div_M):
    """eta1 = eta_kappa + kappa^*(eta2), with eta_i the anchor modular forms."""
    E1, E2 = kappa.source, kappa.target
    T = tangent_algebroid(E1.ring)
    eta1 = modular_of_morphism(anchor_morphism(E1, T), div1, div_M)
    eta2 = modular_of_morphism(anchor_morphism(E2, T), div2, div_M)
    eta_k = modular_of_morphism(kappa, div1, div2)
    return CompositionReport(eta1, eta_k, eta2, pullback_form(kappa, eta2))


@dataclass
class ExactnessReport:
    """status is "trivial", "nontrivial" or "undecided at degree bound N"."""

    status: str
    primitive: object = None

    @property
    def trivial(self):
        return self.status == "trivial"


def _monomials(m, bound):
    out = []
    for deg in range(bound + 1):
        for combo in combinations_with_replacement(range(m), deg):
            e = [0] * m
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def exactness(E, phi, degree_bound=3):
    """Search for a polynomial f of degree <= degree_bound with d f = phi.

    Without base coordinates d kills all functions, so the answer is exact.
    Otherwise failure only means no primitive exists in the ansatz.
    """
    ring = E.ring
    if not phi:
        return ExactnessReport("trivial", ring.zero)
    if E.m == 0:
        return ExactnessReport("nontrivial")
    if any(not isinstance(c, Poly) for c in phi.terms.values()):
        return ExactnessReport(f"undecided at degree bound {degree_bound}")
    monos = _monomials(E.m, degree_bound)
    images = [E.function_differential(Poly(ring, {e: Fraction(1)})) for e in monos]
    rows = {}
    for col, img in enumerate(images):
        for (i,), c in img.terms.items():
            for e, v in c.terms.items():
                rows.setdefault((i, e), {})[col] = v
    for (i,), c in phi.terms.items():
        for e in c.terms:
            rows.setdefault((i, e), {})
    keys = sorted(rows)
    A = [[rows[k].get(col, 0) for col in range(len(monos))] for k in keys]
    b = [phi.coeff((i,)).terms.get(e, 0) for (i, e) in keys]
    sol = solve_rational(A, b)
    if sol is None:
        return ExactnessReport(f"undecided at degree bound {degree_bound}")
    f = Poly(ring, {e: Fraction(v) for e, v in zip(monos, sol) if v})
    return ExactnessReport("trivial", f)
