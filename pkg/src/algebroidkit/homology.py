"""Finite-dimensional (co)homology of Lie algebras (no base coordinates).

Matrices act on the wedge-monomial basis of each degree, ordered
lexicographically on increasing index tuples.  Column j of the degree-k
matrix holds the image of the j-th basis element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .calculus import de_rham, deformed_generating, generating_from_odd_volume, witten_differential
from .exterior import Form, Multivector, OddVolume
from .linalg import is_zero_matrix, matmul, rank

__all__ = [
    "NotFiniteDimensional",
    "NotClosed",
    "ChainComplex",
    "BettiTable",
    "DualityReport",
    "IndependenceReport",
    "monomial_basis",
    "build_cochain",
    "build_chain",
    "betti",
    "duality_check",
    "homology_independence",
]


class NotFiniteDimensional(ValueError):
    pass


class NotClosed(ValueError):
    pass


def monomial_basis(n, k):
    return list(combinations(range(n), k))


@dataclass
class ChainComplex:
    """``matrices[k]`` is the differential leaving degree k; direction is
    "raising" for d and "lowering" for the boundary operator."""

    n: int
    direction: str
    matrices: dict = field(default_factory=dict)

    def target_degree(self, k):
        return k + 1 if self.direction == "raising" else k - 1

    def composition_zero(self):
        for k, A in self.matrices.items():
            B = self.matrices.get(self.target_degree(k))
            if B is not None and A and B and not is_zero_matrix(matmul(B, A)):
                return False
        return True


@dataclass(frozen=True)
class BettiTable:
    dims: tuple

    def euler_characteristic(self):
        return sum((-1) ** k * d for k, d in enumerate(self.dims))

    def reversed(self):
        return BettiTable(self.dims[::-1])

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)


def _require_lie_algebra(E):
    if E.m > 0:
        raise NotFiniteDimensional(
            f"(co)homology over {E.m} base coordinates is infinite-dimensional over Q")


def _require_closed(E, phi):
    if phi is None:
        return None
    if not isinstance(phi, Form) or set(phi.degrees()) - {1}:
        raise ValueError("deformation must be a 1-form")
    if de_rham(E, phi):
        raise NotClosed("deformation 1-form is not closed")
    return phi


def _matrix(ring, n, k, target_k, image):
    rows = {I: r for r, I in enumerate(monomial_basis(n, target_k))}
    cols = monomial_basis(n, k)
    M = [[Fraction(0)] * len(cols) for _ in rows]
    for j, I in enumerate(cols):
        for J, c in image(I).terms.items():
            M[rows[J]][j] = c.constant_value()
    return M


def build_cochain(E, phi=None):
    """Matrices of d (or d + phi/\\) on each degree."""
    _require_lie_algebra(E)
    phi = _require_closed(E, phi)
    ring, n = E.ring, E.n
    if phi is None:
        op = lambda I: de_rham(E, Form.basis(ring, n, I))
    else:
        op = lambda I: witten_differential(E, phi, Form.basis(ring, n, I))
    mats = {k: _matrix(ring, n, k, k + 1, op) for k in range(n)}
    return ChainComplex(n, "raising", mats)


def build_chain(E, mu=None, phi=None):
    """Matrices of the volume's generating operator (minus i_phi if given)."""
    _require_lie_algebra(E)
    phi = _require_closed(E, phi)
    ring, n = E.ring, E.n
    if mu is None:
        mu = OddVolume(ring.one)
    if phi is None:
        op = lambda I: generating_from_odd_volume(E, mu, Multivector.basis(ring, n, I))
    else:
        op = lambda I: deformed_generating(E, mu, phi, Multivector.basis(ring, n, I))
    mats = {k: _matrix(ring, n, k, k - 1, op) for k in range(1, n + 1)}
    return ChainComplex(n, "lowering", mats)


def betti(C):
    """dim ker - dim im in every degree, from exact ranks."""
    n = C.n
    ranks = {k: rank(A) if A and A[0] else 0 for k, A in C.matrices.items()}
    dims = []
    for k in range(n + 1):
        incoming = k - 1 if C.direction == "raising" else k + 1
        dims.append(comb(n, k) - ranks.get(k, 0) - ranks.get(incoming, 0))
    return BettiTable(tuple(dims))


@dataclass
class DualityReport:
    cohomology: BettiTable
    homology: BettiTable

    @property
    def duality(self):
        return self.cohomology.dims == self.homology.dims[::-1]

    @property
    def ok(self):
        return self.duality

    def as_dict(self):
        return {"cohomology": list(self.cohomology.dims), "homology": list(self.homology.dims),
                "duality": self.duality}


def duality_check(E, mu=None, phi=None):
    """Compare dim H^k (of d or d + phi) with dim H_{n-k} (of the dual operator)."""
    return DualityReport(betti(build_cochain(E, phi)), betti(build_chain(E, mu, phi)))


@dataclass
class IndependenceReport:
    first: BettiTable
    second: BettiTable
    same_matrices: bool

    @property
    def ok(self):
        return self.first == self.second


def homology_independence(E, mu1, mu2):
    C1, C2 = build_chain(E, mu1), build_chain(E, mu2)
    return IndependenceReport(betti(C1), betti(C2), C1.matrices == C2.matrices)
