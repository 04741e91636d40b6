"""Cartan calculus on a Lie algebroid: d, Lie derivatives, divergences and generating operators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .algebroid import schouten
from .exterior import (
    Form,
    Multivector,
    wedge,
    contract_form,
    contract_multi,
    star_mu,
    star_mu_inv,
)

__all__ = [
    "Divergence",
    "CocycleReport",
    "de_rham",
    "lie_derivative_form",
    "lie_derivative_multi",
    "divergence_of",
    "divergence_from_odd_volume",
    "volume_log_derivative",
    "generating_from_divergence",
    "generating_from_odd_volume",
    "divergence_difference",
    "witten_differential",
    "deformed_generating",
    "deformed_generating_conjugated",
    "check_cocycle",
]


@dataclass(frozen=True)
class Divergence:
    """Frame values div(X_i); extended by div(fX) = f div(X) + rho(X)(f)."""

    values: tuple
    cocycle_verified: bool = False

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, Divergence):
            return NotImplemented
        return self.values == other.values

    def __hash__(self):
        return hash(self.values)


def _d_basis(E, I):
    key = ("d", I)
    cached = E._cache.get(key)
    if cached is not None:
        return cached
    ring, n = E.ring, E.n
    if not I:
        out = Form.zero(ring, n)
    elif len(I) == 1:
        (k,) = I
        terms = {}
        for i, j in combinations(range(n), 2):
            c = E.structure(k, i, j)
            if c:
                terms[(i, j)] = -c
        out = Form._make(ring, n, terms)
    else:
        # d(a^i /\ rest) = d a^i /\ rest - a^i /\ d rest
        head = Form.basis(ring, n, I[:1])
        rest = Form.basis(ring, n, I[1:])
        out = wedge(_d_basis(E, I[:1]), rest) - wedge(head, _d_basis(E, I[1:]))
    E._cache[key] = out
    return out


def de_rham(E, omega):
    """The algebroid differential; d f = sum rho(X_i)(f) a^i, d a^k = -sum_{i<j} c^k_ij a^i/\\a^j."""
    out = Form.zero(E.ring, E.n)
    for I, f in omega.terms.items():
        df = E.function_differential(f)
        if df:
            out = out + wedge(df, Form.basis(E.ring, E.n, I))
        dI = _d_basis(E, I)
        if dI:
            out = out + dI.scale(f)
    return out


def lie_derivative_form(E, a, omega):
    """L_a = i_a d - (-1)^|a| d i_a, applied degree by degree in a."""
    out = Form.zero(E.ring, E.n)
    d_omega = None
    for k, ak in a.components():
        if d_omega is None:
            d_omega = de_rham(E, omega)
        t1 = contract_form(ak, d_omega)
        t2 = de_rham(E, contract_form(ak, omega))
        out = out + (t1 + t2 if k % 2 else t1 - t2)
    return out


def lie_derivative_multi(E, X, a):
    """L_X a = [X, a]."""
    return schouten(E, X, a)


def divergence_of(E, div, X):
    """Evaluate a divergence on an arbitrary section."""
    out = E.ring.zero
    for (i,), f in X.terms.items():
        out = out + f * div.values[i] + E.anchor_frame(i, f)
    return out


def volume_log_derivative(E, mu):
    """The 1-form d(log|mu|) - d(log coeff) contributed by the determinant factor: (1/2) dD/D."""
    if mu.det_factor is None:
        return Form.zero(E.ring, E.n)
    D = mu.det_factor
    return E.function_differential(D).map_coeffs(lambda c: c / D * Fraction(1, 2))


def divergence_from_odd_volume(E, mu):
    """div(X_i) with L_{X_i}|mu| = div(X_i) |mu|."""
    top = mu.top_form(E.n)
    full = tuple(range(E.n))
    extra = volume_log_derivative(E, mu)
    values = []
    for i in range(E.n):
        L = lie_derivative_form(E, E.frame_vector(i), top)
        v = L.coeff(full) / mu.coeff
        values.append(v + extra.coeff((i,)))
    div = Divergence(tuple(values))
    if check_cocycle(E, div).ok:
        div = Divergence(div.values, cocycle_verified=True)
    return div


def _generating_basis(E, div, I):
    """The generating operator on X_I, expanded from its values on sections."""
    key = ("gen", div.values, I)
    cached = E._cache.get(key)
    if cached is not None:
        return cached
    ring, n = E.ring, E.n
    out = Multivector.zero(ring, n)
    for r, i in enumerate(I):
        # (-1)^{r} with 0-based r, partial(X_i) = -div(X_i)
        v = div.values[i]
        if v:
            rest = I[:r] + I[r + 1:]
            t = Multivector.basis(ring, n, rest, -v)
            out = out + (t if r % 2 == 0 else -t)
    for k, l in combinations(range(len(I)), 2):
        br = E.frame_bracket(I[k], I[l])
        if not br:
            continue
        rest = I[:k] + I[k + 1:l] + I[l + 1:]
        t = wedge(br, Multivector.basis(ring, n, rest))
        out = out + (t if (k + l) % 2 == 0 else -t)
    E._cache[key] = out
    return out


def generating_from_divergence(E, div, a):
    """Second-order operator of degree -1 determined by partial(X_i) = -div(X_i).

    On monomials: partial(f X_I) = f partial(X_I) - i_{df} X_I.
    """
    out = Multivector.zero(E.ring, E.n)
    for I, f in a.terms.items():
        if not I:
            continue
        out = out + _generating_basis(E, div, I).scale(f)
        df = E.function_differential(f)
        if df:
            out = out - contract_multi(df, Multivector.basis(E.ring, E.n, I))
    return out


def _conjugated(E, mu, psi, a):
    """(-1)^|a| star^-1 (d + psi/\\) star (a), degree by degree."""
    out = Multivector.zero(E.ring, E.n)
    for k, ak in a.components():
        w = star_mu(mu, ak)
        dw = de_rham(E, w)
        if psi is not None and psi:
            dw = dw + wedge(psi, w)
        t = star_mu_inv(mu, dw)
        out = out + (-t if k % 2 else t)
    return out


def generating_from_odd_volume(E, mu, a):
    """The homology operator of an odd volume, by conjugating d with the star map."""
    return _conjugated(E, mu, volume_log_derivative(E, mu), a)


def divergence_difference(E, div1, div2):
    """The 1-form phi with <phi, X_i> = div1(X_i) - div2(X_i)."""
    return Form._make(E.ring, E.n, {(i,): v for i, (a, b) in enumerate(zip(div1.values, div2.values))
                                    if (v := a - b)})


def witten_differential(E, phi, omega):
    """d^phi omega = d omega + phi /\\ omega."""
    return de_rham(E, omega) + wedge(phi, omega)


def deformed_generating(E, mu, phi, a):
    """partial_|mu| - i_phi."""
    return generating_from_odd_volume(E, mu, a) - contract_multi(phi, a)


def deformed_generating_conjugated(E, mu, phi, a):
    """(-1)^|a| star^-1 (d + phi/\\) star (a); agrees with :func:`deformed_generating`."""
    psi = volume_log_derivative(E, mu) + phi
    return _conjugated(E, mu, psi, a)


@dataclass
class CocycleReport:
    """residuals[(i, j)] = div([X_i,X_j]) - rho(X_i)(div X_j) + rho(X_j)(div X_i), nonzero only."""

    residuals: dict

    @property
    def ok(self):
        return not self.residuals


def check_cocycle(E, div):
    res = {}
    for i, j in combinations(range(E.n), 2):
        r = (divergence_of(E, div, E.frame_bracket(i, j))
             - E.anchor_frame(i, div.values[j]) + E.anchor_frame(j, div.values[i]))
        if r:
            res[(i, j)] = r
    return CocycleReport(res)
