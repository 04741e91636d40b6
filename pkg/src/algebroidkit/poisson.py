"""Bivector fields, their cotangent algebroids, and Poisson modular forms.

Conventions: {u^a, u^b} = P^{ab} and [du^a, du^b] = d P^{ab}, so the frame
du^a has anchor sum_b P^{ab} d/du^b and structure functions
c^c_ab = dP^{ab}/du^c.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .algebroid import LieAlgebroid, schouten, tangent_algebroid, validate_algebroid
from .coeffring import PolyRing, partial
from .exterior import Multivector
from .modular import modular_representative

__all__ = [
    "JacobiViolation",
    "PoissonBivector",
    "cotangent_algebroid",
    "jacobi_residual",
    "poisson_modular_form",
]


class JacobiViolation(ValueError):
    pass


class PoissonBivector:
    """Antisymmetric m x m coefficient matrix P^{ab} on a coordinate chart."""

    name = None

    def __init__(self, ring, matrix):
        if not isinstance(ring, PolyRing):
            ring = PolyRing(ring)
        P = [[ring(v) for v in row] for row in matrix]
        m = ring.nvars
        if len(P) != m or any(len(row) != m for row in P):
            raise ValueError(f"bivector matrix must be {m}x{m}")
        for a in range(m):
            if P[a][a]:
                raise ValueError(f"bivector has nonzero diagonal entry at {a + 1}")
            for b in range(a + 1, m):
                if P[a][b] != -P[b][a]:
                    raise ValueError(f"bivector is not antisymmetric at ({a + 1},{b + 1})")
        self.ring = ring
        self.P = tuple(tuple(row) for row in P)

    @classmethod
    def from_upper(cls, ring, entries):
        """Build from {(a, b): P^{ab}} with a < b (0-based); missing entries are zero."""
        if not isinstance(ring, PolyRing):
            ring = PolyRing(ring)
        m = ring.nvars
        P = [[ring.zero] * m for _ in range(m)]
        for (a, b), v in entries.items():
            if not 0 <= a < b < m:
                raise ValueError(f"bivector index pair ({a + 1},{b + 1}) must satisfy 1 <= a < b <= {m}")
            P[a][b] = ring(v)
            P[b][a] = -P[a][b]
        return cls(ring, P)

    @property
    def m(self):
        return self.ring.nvars

    def upper(self):
        return {(a, b): self.P[a][b] for a, b in combinations(range(self.m), 2)}

    def as_multivector(self, T=None):
        """P = sum_{a<b} P^{ab} d_a /\\ d_b on the tangent algebroid."""
        T = T or tangent_algebroid(self.ring)
        return Multivector._make(self.ring, self.m, {(a, b): v for (a, b), v in self.upper().items() if v})

    def __eq__(self, other):
        return isinstance(other, PoissonBivector) and self.ring == other.ring and self.P == other.P

    def __hash__(self):
        return hash(self.P)


def cotangent_algebroid(P, name=None):
    """The Lie algebroid on T*M with frame du^1..du^m."""
    ring, m = P.ring, P.m
    name = name or P.name
    brackets = {}
    for a, b in combinations(range(m), 2):
        coeffs = [partial(P.P[a][b], c) for c in range(m)]
        if any(coeffs):
            brackets[(a, b)] = coeffs
    return LieAlgebroid(ring, [f"d{u}" for u in ring.names], [list(row) for row in P.P], brackets,
                        coframe=[f"D{u}" for u in ring.names], name=name)


def jacobi_residual(P):
    """(1/2)[P, P] computed with the Schouten bracket of the tangent algebroid."""
    T = tangent_algebroid(P.ring)
    Pm = P.as_multivector(T)
    return schouten(T, Pm, Pm).scale(Fraction(1, 2))


def poisson_modular_form(P):
    """Modular 1-form of the cotangent algebroid for coordinate volumes."""
    E = cotangent_algebroid(P)
    report = validate_algebroid(E)
    if not report.ok:
        raise JacobiViolation(f"bivector violates the Jacobi identity ({report.summary()})")
    return modular_representative(E)
