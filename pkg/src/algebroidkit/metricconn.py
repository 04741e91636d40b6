"""Fiber metrics, E-connections, curvature, and divergences they induce.

A connection is stored by its Christoffel symbols in the frame:
``gamma[i][j][k]`` is the X_k-component of nabla_{X_i} X_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .calculus import Divergence, check_cocycle, divergence_from_odd_volume
from .coeffring import DivisionByZero
from .exterior import Multivector, OddVolume, contract_multi, wedge
from .linalg import det, inverse

__all__ = [
    "SingularMetric",
    "FiberMetric",
    "Connection",
    "Curvature",
    "CurvatureReport",
    "levi_civita",
    "torsion_residuals",
    "metricity_residuals",
    "covariant_derivative",
    "covariant_derivative_multi",
    "connection_generating",
    "curvature",
    "curvature_identity_check",
    "divergence_from_connection",
    "divergence_from_metric_volume",
]


class SingularMetric(ValueError):
    pass


class FiberMetric:
    """Symmetric n x n matrix g_ij = g(X_i, X_j) with nonzero determinant."""

    def __init__(self, ring, g):
        g = [[ring(v) for v in row] for row in g]
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("metric must be square")
        for i, j in combinations(range(n), 2):
            if g[i][j] != g[j][i]:
                raise ValueError(f"metric is not symmetric at ({i + 1},{j + 1})")
        self.ring = ring
        self.g = tuple(tuple(row) for row in g)
        self.det = det(self.g) if n else ring.one
        if not self.det:
            raise SingularMetric("metric determinant vanishes identically")

    @property
    def n(self):
        return len(self.g)

    def inverse(self):
        try:
            return inverse(self.g)
        except DivisionByZero:
            raise SingularMetric("metric is not invertible") from None

    def __call__(self, X, Y):
        out = self.ring.zero
        for (i,), f in X.terms.items():
            for (j,), h in Y.terms.items():
                if self.g[i][j]:
                    out = out + f * h * self.g[i][j]
        return out


@dataclass(frozen=True)
class Connection:
    gamma: tuple

    @property
    def n(self):
        return len(self.gamma)

    def christoffel(self, k, i, j):
        """Gamma^k_ij."""
        return self.gamma[i][j][k]

    @classmethod
    def from_christoffel(cls, ring, n, symbols):
        """Build from a mapping (k, i, j) -> Gamma^k_ij; missing entries are zero."""
        g = [[[ring.zero] * n for _ in range(n)] for _ in range(n)]
        for (k, i, j), v in symbols.items():
            g[i][j][k] = ring(v)
        return cls(tuple(tuple(tuple(col) for col in row) for row in g))


def _nabla_frame(E, conn, i, j):
    return Multivector._make(E.ring, E.n, {(k,): c for k, c in enumerate(conn.gamma[i][j]) if c})


def covariant_derivative(E, conn, X, Y):
    """nabla_X Y for sections, tensorial in X and Leibniz in Y."""
    out = Multivector.zero(E.ring, E.n)
    for (i,), f in X.terms.items():
        for (j,), h in Y.terms.items():
            out = out + _nabla_frame(E, conn, i, j).scale(f * h)
            d = E.anchor_frame(i, h)
            if d:
                out = out + E.frame_vector(j, f * d)
    return out


def covariant_derivative_multi(E, conn, i, a):
    """nabla_{X_i} extended to multivectors as a derivation."""
    ring, n = E.ring, E.n
    out = Multivector.zero(ring, n)
    for J, f in a.terms.items():
        d = E.anchor_frame(i, f)
        if d:
            out = out + Multivector.basis(ring, n, J, d)
        for r, j in enumerate(J):
            nb = _nabla_frame(E, conn, i, j)
            if not nb:
                continue
            t = nb
            if r:
                t = wedge(Multivector.basis(ring, n, J[:r]), t)
            if r + 1 < len(J):
                t = wedge(t, Multivector.basis(ring, n, J[r + 1:]))
            out = out + t.scale(f)
    return out


def connection_generating(E, conn, a):
    """-sum_k i(a^k) nabla_{X_k} a."""
    out = Multivector.zero(E.ring, E.n)
    for k in range(E.n):
        ak = E.form({(k,): 1})
        out = out - contract_multi(ak, covariant_derivative_multi(E, conn, k, a))
    return out


def levi_civita(E, metric):
    """The torsion-free metric connection, from the Koszul formula.

    2 g(nabla_X Y, Z) = rho(X) g(Y,Z) + rho(Y) g(X,Z) - rho(Z) g(X,Y)
                        + g([X,Y],Z) - g([X,Z],Y) - g([Y,Z],X)
    """
    if not isinstance(metric, FiberMetric):
        metric = FiberMetric(E.ring, metric)
    n = E.n
    g = metric.g
    ginv = metric.inverse()
    half = Fraction(1, 2)

    def gb(i, j, k):
        # g([X_i, X_j], X_k)
        return sum((c * g[p][k] for p, c in enumerate(E.bracket_coeffs(i, j)) if c), E.ring.zero)

    gamma = []
    for i in range(n):
        row = []
        for j in range(n):
            K = [E.anchor_frame(i, g[j][k]) + E.anchor_frame(j, g[i][k]) - E.anchor_frame(k, g[i][j])
                 + gb(i, j, k) - gb(i, k, j) - gb(j, k, i) for k in range(n)]
            row.append(tuple(sum((ginv[l][k] * K[k] for k in range(n) if K[k]), E.ring.zero) * half
                             for l in range(n)))
        gamma.append(tuple(row))
    return Connection(tuple(gamma))


def torsion_residuals(E, conn):
    """Nonzero components of nabla_{X_i}X_j - nabla_{X_j}X_i - [X_i,X_j], i<j."""
    out = {}
    for i, j in combinations(range(E.n), 2):
        r = tuple(conn.gamma[i][j][k] - conn.gamma[j][i][k] - E.structure(k, i, j) for k in range(E.n))
        if any(r):
            out[(i, j)] = r
    return out


def metricity_residuals(E, conn, metric):
    """Nonzero rho(X_i) g(X_j,X_k) - g(nabla_i X_j, X_k) - g(X_j, nabla_i X_k)."""
    if not isinstance(metric, FiberMetric):
        metric = FiberMetric(E.ring, metric)
    g = metric.g
    n = E.n
    out = {}
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                r = E.anchor_frame(i, g[j][k])
                for l in range(n):
                    r = r - conn.gamma[i][j][l] * g[l][k] - conn.gamma[i][k][l] * g[j][l]
                if r:
                    out[(i, j, k)] = r
    return out


@dataclass(frozen=True)
class Curvature:
    """``comps[i][j][k][l]`` is the X_l-component of R(X_i, X_j) X_k."""

    comps: tuple

    def component(self, l, k, i, j):
        return self.comps[i][j][k][l]

    def apply(self, E, i, j, a):
        """R(X_i, X_j) acting on a multivector as a (tensorial) derivation."""
        ring, n = E.ring, E.n
        out = Multivector.zero(ring, n)
        for J, f in a.terms.items():
            for r, s in enumerate(J):
                v = Multivector._make(ring, n, {(l,): c for l, c in enumerate(self.comps[i][j][s]) if c})
                if not v:
                    continue
                t = v
                if r:
                    t = wedge(Multivector.basis(ring, n, J[:r]), t)
                if r + 1 < len(J):
                    t = wedge(t, Multivector.basis(ring, n, J[r + 1:]))
                out = out + t.scale(f)
        return out

    def is_zero(self):
        return not any(c for a in self.comps for b in a for k in b for c in k)


def curvature(E, conn):
    """R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y] on frame sections."""
    n = E.n
    zero = E.ring.zero
    G = conn.gamma
    comps = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if i == j:
                    comps[i][j][k] = (zero,) * n
                    continue
                if j < i:
                    comps[i][j][k] = tuple(-c for c in comps[j][i][k])
                    continue
                vec = []
                for l in range(n):
                    v = E.anchor_frame(i, G[j][k][l]) - E.anchor_frame(j, G[i][k][l])
                    for p in range(n):
                        v = v + G[j][k][p] * G[i][p][l] - G[i][k][p] * G[j][p][l]
                        c = E.structure(p, i, j)
                        if c:
                            v = v - c * G[p][k][l]
                    vec.append(v)
                comps[i][j][k] = tuple(vec)
    return Curvature(tuple(tuple(tuple(row) for row in plane) for plane in comps))


@dataclass
class CurvatureReport:
    """Operator identity (A), Ricci symmetry (B), first Bianchi identity (C)."""

    operator_identity: bool
    ricci_symmetric: bool
    bianchi: bool
    torsion_free: bool

    @property
    def equivalence(self):
        return self.operator_identity == (self.ricci_symmetric and self.bianchi)

    @property
    def ok(self):
        return self.equivalence

    def summary(self):
        yn = lambda b: "yes" if b else "no"
        return (f"operator identity: {yn(self.operator_identity)}, "
                f"Ricci symmetric: {yn(self.ricci_symmetric)}, Bianchi: {yn(self.bianchi)}, "
                f"torsion-free: {yn(self.torsion_free)}, equivalence holds: {yn(self.equivalence)}")


def curvature_identity_check(E, conn):
    """Check sum_{j,k} i(a^j) i(a^k) R(X_j,X_k) = 0 against Ricci symmetry and Bianchi.

    The operator identity is tested on every basis multivector of every
    degree; it is tensorial, so this is exhaustive.
    """
    from .exterior import basis

    n = E.n
    R = curvature(E, conn)
    coframe = [E.form({(k,): 1}) for k in range(n)]
    op_ok = True
    for deg in range(n + 1):
        for X in basis(Multivector, E.ring, n, deg):
            total = Multivector.zero(E.ring, n)
            for j in range(n):
                for k in range(n):
                    if j == k:
                        continue
                    RX = R.apply(E, j, k, X)
                    if RX:
                        total = total + contract_multi(coframe[j], contract_multi(coframe[k], RX))
            if total:
                op_ok = False
                break
        if not op_ok:
            break

    def S(s, t):
        # sum_k <a^k, R(X_t, X_k) X_s>
        return sum((R.comps[t][k][s][k] for k in range(n)), E.ring.zero)

    ricci = all(S(s, t) == S(t, s) for s, t in combinations(range(n), 2))
    bianchi = True
    for j, k, s in combinations(range(n), 3):
        for l in range(n):
            if R.comps[j][k][s][l] + R.comps[k][s][j][l] + R.comps[s][j][k][l]:
                bianchi = False
    return CurvatureReport(op_ok, ricci, bianchi, not torsion_residuals(E, conn))


def divergence_from_connection(E, conn):
    """div(X_i) = sum_k Gamma^k_ki = sum_k <a^k, nabla_{X_k} X_i>, i.e. minus the
    connection's generating operator on sections."""
    values = tuple(sum((conn.gamma[k][i][k] for k in range(E.n)), E.ring.zero) for i in range(E.n))
    div = Divergence(values)
    return Divergence(values, cocycle_verified=check_cocycle(E, div).ok)


def divergence_from_metric_volume(E, metric):
    """Divergence of the odd volume of a metric: s = 1 with determinant factor det g."""
    if not isinstance(metric, FiberMetric):
        metric = FiberMetric(E.ring, metric)
    return divergence_from_odd_volume(E, OddVolume(E.ring.one, metric.det))
