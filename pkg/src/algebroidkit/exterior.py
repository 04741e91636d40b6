"""Sparse exterior algebras of multivectors and forms.

An element is a map from strictly increasing index tuples (0-based) to
coefficients of a :class:`~algebroidkit.coeffring.PolyRing`.  Multivectors
live in the algebra generated by the frame X_1..X_n, forms in the algebra
generated by the dual coframe a^1..a^n.

Contraction convention (see docs/conventions.md): a section inserts into
the first slot, ``i_X a^{12} = a^2``, and ``i_{a/\\b} = i_b o i_a``, so
``i_{X1/\\X2} a^{12} = i_{X2} a^2 = 1``; in general ``i_{X_I} a^I = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coeffring import Poly, RatFunc, PolyRing, DivisionByZero
from . import parsing

__all__ = [
    "Multivector",
    "Form",
    "OddVolume",
    "RankMismatch",
    "NonInvertibleVolume",
    "wedge",
    "pair",
    "contract_form",
    "contract_multi",
    "star_mu",
    "star_mu_inv",
    "basis",
]


class RankMismatch(ValueError):
    pass


class NonInvertibleVolume(ValueError):
    pass


@lru_cache(maxsize=None)
def _merge(I, J):
    """Sign and sorted union of disjoint increasing tuples, or (0, None)."""
    if not I:
        return 1, J
    if not J:
        return 1, I
    sI = set(I)
    inversions = 0
    for j in J:
        if j in sI:
            return 0, None
        inversions += sum(1 for i in I if i > j)
    return (-1 if inversions & 1 else 1), tuple(sorted(I + J))


@lru_cache(maxsize=None)
def _remove_seq(J, I):
    """Sign and remainder of i_{X_J} a^I, applying the first index of J first."""
    cur = list(I)
    sign = 1
    for j in J:
        try:
            p = cur.index(j)
        except ValueError:
            return 0, None
        if p & 1:
            sign = -sign
        del cur[p]
    return sign, tuple(cur)


class _Graded:
    __slots__ = ("ring", "n", "terms")
    _default_prefix = "?"

    def __init__(self, ring, n, terms=None):
        self.ring = ring
        self.n = n
        clean = {}
        for I, c in (terms or {}).items():
            I = tuple(I)
            if any(b <= a for a, b in zip(I, I[1:])) or any(not 0 <= i < n for i in I):
                raise ValueError(f"index tuple {I} is not strictly increasing in 0..{n - 1}")
            c = ring(c)
            if c:
                clean[I] = c
        self.terms = clean

    @classmethod
    def _make(cls, ring, n, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, ring, n):
        return cls._make(ring, n, {})

    @classmethod
    def scalar(cls, ring, n, c):
        c = ring(c)
        return cls._make(ring, n, {(): c} if c else {})

    @classmethod
    def basis(cls, ring, n, I, coeff=1):
        return cls(ring, n, {tuple(I): coeff})

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.n != self.n:
            raise RankMismatch(f"rank {self.n} vs rank {other.n}")
        if other.ring != self.ring:
            raise ValueError("coefficient ring mismatch")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, _Graded):
            return (type(other) is type(self) and self.n == other.n
                    and self.ring == other.ring and self.terms == other.terms)
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, self.n, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for I, c in other.terms.items():
            v = out.get(I)
            v = c if v is None else v + c
            if v:
                out[I] = v
            else:
                out.pop(I, None)
        return self._make(self.ring, self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return self._make(self.ring, self.n, {I: -c for I, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiply by a coefficient."""
        if not isinstance(c, (Poly, RatFunc)):
            c = self.ring(c)
        if not c:
            return self._make(self.ring, self.n, {})
        out = {}
        for I, v in self.terms.items():
            w = v * c
            if w:
                out[I] = w
        return self._make(self.ring, self.n, out)

    def __mul__(self, other):
        if isinstance(other, _Graded):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def map_coeffs(self, fn):
        out = {}
        for I, c in self.terms.items():
            v = fn(c)
            if v:
                out[I] = v
        return self._make(self.ring, self.n, out)

    def coeff(self, I):
        return self.terms.get(tuple(I), self.ring.zero)

    def degrees(self):
        return sorted({len(I) for I in self.terms})

    @property
    def degree(self):
        """Degree of a homogeneous element; the zero element has degree 0."""
        ds = {len(I) for I in self.terms}
        if len(ds) > 1:
            raise ValueError(f"element is not homogeneous (degrees {sorted(ds)})")
        return ds.pop() if ds else 0

    def is_homogeneous(self):
        return len({len(I) for I in self.terms}) <= 1

    def component(self, k):
        return self._make(self.ring, self.n, {I: c for I, c in self.terms.items() if len(I) == k})

    def components(self):
        """Homogeneous components as (degree, element) pairs."""
        return [(k, self.component(k)) for k in self.degrees()]

    def items(self):
        return self.terms.items()

    def format(self, names=None):
        if names is None:
            names = [f"{self._default_prefix}{i + 1}" for i in range(self.n)]
        if not self.terms:
            return "0"
        out = []
        for I in sorted(self.terms, key=lambda I: (len(I), I)):
            c = self.terms[I]
            mono = "/\\".join(names[i] for i in I)
            neg = False
            if isinstance(c, Poly) and c.is_monomial() and c.leading()[1] < 0:
                neg, c = True, -c
            if not mono:
                body = str(c) if not (isinstance(c, Poly) and len(c.terms) > 1) else f"({c})"
            elif c == 1:
                body = mono
            elif isinstance(c, Poly) and c.is_monomial():
                body = f"{c}*{mono}"
            else:
                body = f"({c})*{mono}"
            if not out:
                out.append("-" + body if neg else body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"{type(self).__name__}({self.format()!r})"


class Multivector(_Graded):
    """Element of the Grassmann algebra of multisections, in the frame X_i."""

    __slots__ = ()
    _default_prefix = "e"


class Form(_Graded):
    """Element of the Grassmann algebra of the dual bundle, in the coframe a^i."""

    __slots__ = ()
    _default_prefix = "a"


def basis(kind, ring, n, k):
    """All wedge monomials of degree k, lexicographically ordered."""
    from itertools import combinations

    return [kind.basis(ring, n, I) for I in combinations(range(n), k)]


def wedge(a, b):
    """Graded-commutative product of two multivectors or of two forms."""
    a._check(b)
    out = {}
    for I, c in a.terms.items():
        for J, d in b.terms.items():
            sign, K = _merge(I, J)
            if not sign:
                continue
            v = c * d
            if sign < 0:
                v = -v
            w = out.get(K)
            w = v if w is None else w + v
            if w:
                out[K] = w
            else:
                out.pop(K, None)
    return type(a)._make(a.ring, a.n, out)


def pair(omega, a):
    """Duality pairing with <a^I, X_J> = delta_IJ on increasing tuples."""
    if not isinstance(omega, Form) or not isinstance(a, Multivector):
        raise TypeError("pair(form, multivector)")
    if omega.n != a.n:
        raise RankMismatch(f"rank {omega.n} vs rank {a.n}")
    total = omega.ring.zero
    small, big = (omega, a) if len(omega.terms) <= len(a.terms) else (a, omega)
    for I, c in small.terms.items():
        d = big.terms.get(I)
        if d is not None:
            total = total + c * d
    return total


def contract_form(a, omega):
    """Interior product i_a(omega) of a multivector into a form."""
    if not isinstance(a, Multivector) or not isinstance(omega, Form):
        raise TypeError("contract_form(multivector, form)")
    if omega.n != a.n:
        raise RankMismatch(f"rank {a.n} vs rank {omega.n}")
    out = {}
    for J, c in a.terms.items():
        for I, d in omega.terms.items():
            if len(J) > len(I):
                continue
            sign, K = _remove_seq(J, I)
            if not sign:
                continue
            v = c * d
            if sign < 0:
                v = -v
            w = out.get(K)
            w = v if w is None else w + v
            if w:
                out[K] = w
            else:
                out.pop(K, None)
    return Form._make(omega.ring, omega.n, out)


def contract_multi(phi, a):
    """Contraction i_phi(a) of a 1-form into a multivector (a derivation of degree -1)."""
    if not isinstance(phi, Form) or not isinstance(a, Multivector):
        raise TypeError("contract_multi(form, multivector)")
    if phi.n != a.n:
        raise RankMismatch(f"rank {phi.n} vs rank {a.n}")
    if phi.terms and phi.degree != 1:
        raise ValueError("contract_multi needs a 1-form")
    out = {}
    for (k,), f in phi.terms.items():
        for J, c in a.terms.items():
            sign, K = _remove_seq((k,), J)
            if not sign:
                continue
            v = f * c
            if sign < 0:
                v = -v
            w = out.get(K)
            w = v if w is None else w + v
            if w:
                out[K] = w
            else:
                out.pop(K, None)
    return Multivector._make(a.ring, a.n, out)


@dataclass(frozen=True, eq=False)
class OddVolume:
    """A top-degree volume taken up to sign.

    The representative is ``sqrt(det_factor) * coeff * a^1/\\.../\\a^n``;
    ``det_factor`` is None when absent.  Only the logarithmic derivative of
    the square root is ever used, so everything stays rational.
    """

    coeff: object
    det_factor: object = None

    def __post_init__(self):
        if not self.coeff:
            raise NonInvertibleVolume("volume coefficient is zero")
        if self.det_factor is not None and not self.det_factor:
            raise NonInvertibleVolume("determinant factor is zero")

    @property
    def ring(self):
        return self.coeff.ring

    def _square(self):
        sq = self.coeff * self.coeff
        return sq if self.det_factor is None else sq * self.det_factor

    def __eq__(self, other):
        if not isinstance(other, OddVolume):
            return NotImplemented
        return self._square() == other._square()

    def __hash__(self):
        return hash(self._square())

    def negated(self):
        return OddVolume(-self.coeff, self.det_factor)

    def scaled(self, f):
        return OddVolume(self.coeff * f, self.det_factor)

    def top_form(self, n):
        """The rational part ``coeff * a^1/\\.../\\a^n`` of the representative."""
        return Form._make(self.ring, n, {tuple(range(n)): self.coeff})

    def __str__(self):
        s = f"{self.coeff}"
        return s if self.det_factor is None else f"sqrt({self.det_factor})*({s})"


def star_mu(mu, a):
    """Map a multivector to the form i_a(mu) (rational part of mu only)."""
    return contract_form(a, mu.top_form(a.n))


def star_mu_inv(mu, omega):
    """Inverse of :func:`star_mu`."""
    n = omega.n
    s = mu.coeff
    if not s:
        raise NonInvertibleVolume("volume coefficient is zero")
    full = tuple(range(n))
    out = {}
    for K, c in omega.terms.items():
        sK = set(K)
        J = tuple(i for i in full if i not in sK)
        sign, rest = _remove_seq(J, full)
        assert rest == K
        try:
            v = c / s
        except DivisionByZero:
            raise NonInvertibleVolume("volume coefficient is zero") from None
        out[J] = v if sign > 0 else -v
    return Multivector._make(omega.ring, n, out)


class _ExteriorOps:
    """Parser callbacks building multivectors or forms."""

    def __init__(self, kind, ring, n, names):
        self.kind = kind
        self.ring = ring
        self.n = n
        self.names = {name: i for i, name in enumerate(names)}

    def lift(self, c):
        return self.kind.scalar(self.ring, self.n, c)

    def number(self, k):
        return self.lift(k)

    def name(self, text, src, pos):
        if text in self.names:
            return self.kind.basis(self.ring, self.n, (self.names[text],))
        if text in self.ring._index:
            return self.lift(self.ring.gen(text))
        raise parsing.UnknownVariable(text, src, pos)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def _scalar(self, a, what, pos):
        if any(I for I in a.terms):
            raise parsing.ExpressionSyntaxError(f"{what} needs a scalar operand", "", pos)
        return a.coeff(())

    def mul(self, a, b, pos):
        return wedge(a, b)

    wedge = mul

    def div(self, a, b, pos):
        d = self._scalar(b, "division", pos)
        if not d:
            raise DivisionByZero("division by zero in expression")
        return a.map_coeffs(lambda c: c / d)

    def pow(self, a, k, pos):
        return self.lift(self._scalar(a, "'^'", pos) ** k)


def parse_graded(kind, src, ring, n, names):
    """Parse text such as ``x^2*e1/\\e2 - e3`` into a multivector or form."""
    if not isinstance(ring, PolyRing):
        ring = PolyRing(ring)
    return parsing.parse(src, _ExteriorOps(kind, ring, n, names))
