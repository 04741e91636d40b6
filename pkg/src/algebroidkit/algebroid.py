"""Lie algebroids presented on one chart by an anchor and structure functions.

For a frame X_1..X_n of E over coordinates u^1..u^m::

    [X_i, X_j] = sum_k c^k_ij X_k,      rho(X_i) = sum_a rho^a_i d/du^a.

Indices are 0-based in the Python API and 1-based in text (``e1``, ``a1``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .coeffring import PolyRing
from .exterior import Multivector, Form, wedge, contract_multi, parse_graded

__all__ = [
    "LieAlgebroid",
    "ValidationReport",
    "validate_algebroid",
    "bracket_sections",
    "anchor_apply",
    "schouten",
    "tangent_algebroid",
    "lie_algebra",
    "change_frame",
]


class LieAlgebroid:
    """Chart-level presentation of a Lie algebroid.

    ``anchor[i][a]`` is rho^a_i.  ``brackets`` maps pairs ``(i, j)`` to the
    list of n coefficients of [X_i, X_j] (or a :class:`Multivector`); pairs
    not listed bracket to zero, and ``(j, i)`` is filled by antisymmetry.
    """

    def __init__(self, ring, frame, anchor, brackets=None, coframe=None, name=None, metric=None):
        if not isinstance(ring, PolyRing):
            ring = PolyRing(ring)
        self.ring = ring
        self.frame = tuple(frame)
        n = len(self.frame)
        self.coframe = tuple(coframe) if coframe is not None else tuple(f"a{i + 1}" for i in range(n))
        if len(self.coframe) != n:
            raise ValueError("frame and coframe lengths differ")
        self.name = name
        m = ring.nvars
        anchor = [list(row) for row in anchor] if anchor is not None else [[0] * m for _ in range(n)]
        if len(anchor) != n or any(len(row) != m for row in anchor):
            raise ValueError(f"anchor must be {n} x {m}")
        self.anchor = tuple(tuple(ring(v) for v in row) for row in anchor)
        zero = ring.zero
        table = [[(zero,) * n for _ in range(n)] for _ in range(n)]
        for (i, j), value in (brackets or {}).items():
            if i == j:
                raise ValueError(f"bracket of X{i + 1} with itself must vanish")
            if isinstance(value, Multivector):
                comps = [value.coeff((k,)) for k in range(n)]
                if any(len(I) != 1 for I in value.terms):
                    raise ValueError("bracket values must be sections")
            else:
                comps = [ring(v) for v in value]
            if len(comps) != n:
                raise ValueError("bracket value has wrong length")
            table[i][j] = tuple(comps)
            table[j][i] = tuple(-c for c in comps)
        self._c = tuple(tuple(row) for row in table)
        self.metric = None if metric is None else tuple(tuple(ring(v) for v in row) for row in metric)
        self._cache = {}

    @property
    def m(self):
        return self.ring.nvars

    @property
    def n(self):
        return len(self.frame)

    @property
    def coords(self):
        return self.ring.names

    def structure(self, k, i, j):
        """c^k_ij."""
        return self._c[i][j][k]

    def bracket_coeffs(self, i, j):
        return self._c[i][j]

    def __repr__(self):
        label = self.name or "LieAlgebroid"
        return f"<{label}: m={self.m}, n={self.n}>"

    # -- element constructors ------------------------------------------------
    def section(self, components):
        return Multivector(self.ring, self.n, {(i,): c for i, c in enumerate(components)})

    def frame_vector(self, i, coeff=1):
        return Multivector.basis(self.ring, self.n, (i,), coeff)

    def multivector(self, terms=None):
        return Multivector(self.ring, self.n, terms or {})

    def form(self, terms=None):
        return Form(self.ring, self.n, terms or {})

    def scalar_multivector(self, c):
        return Multivector.scalar(self.ring, self.n, c)

    def scalar_form(self, c):
        return Form.scalar(self.ring, self.n, c)

    def parse_multivector(self, src):
        return parse_graded(Multivector, src, self.ring, self.n, self.frame)

    def parse_form(self, src):
        return parse_graded(Form, src, self.ring, self.n, self.coframe)

    def format(self, element):
        names = self.frame if isinstance(element, Multivector) else self.coframe
        return element.format(names)

    # -- anchor ---------------------------------------------------------------
    def anchor_frame(self, i, f):
        """rho(X_i)(f)."""
        out = self.ring.zero
        for a, r in enumerate(self.anchor[i]):
            if r:
                d = f.partial(a)
                if d:
                    out = out + r * d
        return out

    def function_differential(self, f):
        """The 1-form sum_i rho(X_i)(f) a^i."""
        return Form._make(self.ring, self.n,
                          {(i,): v for i in range(self.n) if (v := self.anchor_frame(i, f))})

    def frame_bracket(self, i, j):
        return Multivector._make(self.ring, self.n,
                                 {(k,): c for k, c in enumerate(self._c[i][j]) if c})


@dataclass
class ValidationReport:
    """Residuals of the frame-level Jacobi identity and the anchor morphism property.

    ``jacobi[(i, j, k)]`` holds the component vector of
    [X_i,[X_j,X_k]] + [X_j,[X_k,X_i]] + [X_k,[X_i,X_j]];
    ``anchor[(i, j)]`` holds the coordinate components of
    rho([X_i,X_j]) - [rho(X_i), rho(X_j)].  Only nonzero entries are kept.
    """

    jacobi: dict = field(default_factory=dict)
    anchor: dict = field(default_factory=dict)

    @property
    def jacobi_ok(self):
        return not self.jacobi

    @property
    def anchor_ok(self):
        return not self.anchor

    @property
    def ok(self):
        return self.jacobi_ok and self.anchor_ok

    def summary(self):
        return (f"Jacobi: {'OK' if self.jacobi_ok else 'FAILED'}, "
                f"anchor: {'OK' if self.anchor_ok else 'FAILED'}")


def validate_algebroid(E):
    """Check the Jacobi identity on frame triples and the anchor on frame pairs.

    Jacobi residual, component l, for i<j<k (cyclic sum over (i,j,k))::

        sum_cyc [ sum_p c^p_jk c^l_ip + rho(X_i)(c^l_jk) ]

    Anchor residual, component a, for i<j::

        sum_k c^k_ij rho^a_k - sum_b (rho^b_i d_b rho^a_j - rho^b_j d_b rho^a_i)

    Triples with a repeated index vanish by antisymmetry, and together with
    the anchor residual the frame triples control the Jacobiator everywhere.
    """
    n, m = E.n, E.m
    zero = E.ring.zero
    report = ValidationReport()
    for i, j, k in combinations(range(n), 3):
        res = []
        for l in range(n):
            total = zero
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for p in range(n):
                    cp = E.structure(p, b, c)
                    if cp:
                        total = total + cp * E.structure(l, a, p)
                total = total + E.anchor_frame(a, E.structure(l, b, c))
            res.append(total)
        if any(res):
            report.jacobi[(i, j, k)] = tuple(res)
    for i, j in combinations(range(n), 2):
        res = []
        for a in range(m):
            total = zero
            for k in range(n):
                ck = E.structure(k, i, j)
                if ck:
                    total = total + ck * E.anchor[k][a]
            total = total - E.anchor_frame(i, E.anchor[j][a]) + E.anchor_frame(j, E.anchor[i][a])
            res.append(total)
        if any(res):
            report.anchor[(i, j)] = tuple(res)
    return report


def anchor_apply(E, X, f):
    """rho(X)(f) for a section X."""
    out = E.ring.zero
    for (i,), c in X.terms.items():
        out = out + c * E.anchor_frame(i, f)
    return out


def bracket_sections(E, X, Y):
    """[X, Y] for sections, from the structure functions and the Leibniz rule."""
    out = Multivector.zero(E.ring, E.n)
    for (i,), f in X.terms.items():
        for (j,), g in Y.terms.items():
            out = out + E.frame_bracket(i, j).scale(f * g)
            out = out + Multivector.basis(E.ring, E.n, (j,), f * E.anchor_frame(i, g))
            out = out - Multivector.basis(E.ring, E.n, (i,), g * E.anchor_frame(j, f))
    return out


def _prefix_suffix(E, J, r):
    pre = Multivector.basis(E.ring, E.n, J[:r]) if r else None
    post = Multivector.basis(E.ring, E.n, J[r + 1:]) if r + 1 < len(J) else None
    return pre, post


def _sandwich(pre, mid, post):
    if pre is not None:
        mid = wedge(pre, mid)
    if post is not None:
        mid = wedge(mid, post)
    return mid


def _frame_with_basis(E, j, I):
    """[X_j, X_I] by the Leibniz rule over the factors of X_I."""
    key = ("fb", j, I)
    cached = E._cache.get(key)
    if cached is not None:
        return cached
    out = Multivector.zero(E.ring, E.n)
    for r, i in enumerate(I):
        br = E.frame_bracket(j, i)
        if not br:
            continue
        pre, post = _prefix_suffix(E, I, r)
        out = out + _sandwich(pre, br, post)
    E._cache[key] = out
    return out


def _monomial_bracket(E, I, f, J, g):
    """[f X_I, g X_J] via graded antisymmetry and the graded Leibniz rule."""
    p = len(I)
    ring, n = E.ring, E.n
    out = Multivector.zero(ring, n)
    XI = Multivector.basis(ring, n, I)
    XJ = Multivector.basis(ring, n, J)
    # [a, g] /\ X_J with [a, g] = (-1)^p f [g, X_I] and [g, X_I] = -i_{dg} X_I
    if p and g:
        dg = E.function_differential(g)
        if dg:
            t = wedge(contract_multi(dg, XI), XJ).scale(f)
            out = out + (t if p % 2 else -t)
    # g [a, X_J], expanded over the factors of X_J
    if J:
        for r, j in enumerate(J):
            # [a, X_j] = -[X_j, f X_I] = -(rho_j(f) X_I + f [X_j, X_I])
            inner = XI.scale(E.anchor_frame(j, f))
            br = _frame_with_basis(E, j, I)
            if br:
                inner = inner + br.scale(f)
            if not inner:
                continue
            pre, post = _prefix_suffix(E, J, r)
            t = _sandwich(pre, inner, post).scale(g)
            if ((p - 1) * r) % 2 == 0:
                out = out - t
            else:
                out = out + t
    return out


def schouten(E, a, b):
    """Schouten bracket of multivectors, degree |a| + |b| - 1."""
    out = Multivector.zero(E.ring, E.n)
    for I, f in a.terms.items():
        for J, g in b.terms.items():
            out = out + _monomial_bracket(E, I, f, J, g)
    return out


def tangent_algebroid(ring, name=None):
    """TM over the chart of ``ring``: frame d/du^a, identity anchor, zero brackets."""
    if not isinstance(ring, PolyRing):
        ring = PolyRing(ring)
    m = ring.nvars
    anchor = [[1 if a == b else 0 for b in range(m)] for a in range(m)]
    return LieAlgebroid(ring, [f"D{u}" for u in ring.names], anchor, {},
                        coframe=[f"d{u}" for u in ring.names], name=name or "tangent")


def lie_algebra(n, brackets, name=None, ring=None):
    """Lie algebra (m = 0 unless ``ring`` is given) with ``brackets[(i, j)]`` lists."""
    ring = ring if ring is not None else PolyRing(())
    frame = [f"e{i + 1}" for i in range(n)]
    anchor = [[0] * ring.nvars for _ in range(n)]
    return LieAlgebroid(ring, frame, anchor, brackets, name=name)


def change_frame(E, A, name=None):
    """Re-present E in the frame Y_i = sum_j A[j][i] X_j (A invertible)."""
    from .linalg import inverse

    n = E.n
    Ainv = inverse([[E.ring(v) for v in row] for row in A])
    Y = [E.section([E.ring(A[j][i]) for j in range(n)]) for i in range(n)]
    anchor = [[anchor_apply(E, Y[i], E.ring.gen(a)) for a in range(E.m)] for i in range(n)]
    brackets = {}
    for i, j in combinations(range(n), 2):
        br = bracket_sections(E, Y[i], Y[j])
        comps = [sum((Ainv[k][l] * br.coeff((l,)) for l in range(n)), E.ring.zero)
                 for k in range(n)]
        if any(comps):
            brackets[(i, j)] = comps
    return LieAlgebroid(E.ring, E.frame, anchor, brackets, coframe=E.coframe,
                        name=name or E.name)
