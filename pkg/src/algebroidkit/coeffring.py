"""Exact coefficient arithmetic over the rationals.

Coefficients are multivariate polynomials (:class:`Poly`) in the base
coordinates of a chart, promoted to reduced rational functions
(:class:`RatFunc`) only when a division does not come out exactly.  Rational
numbers are :class:`fractions.Fraction`.

Monomials are ordered graded-lexicographically; that order fixes both the
printed form and the normalisation of denominators (leading coefficient 1).

>>> R = PolyRing(["x", "y"])
>>> str(R.parse("3/2*x^2 - y"))
'3/2*x^2 - y'
>>> str(R.parse("(x^2 - 1)/(x - 1)"))
'x + 1'
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import re

from . import parsing

__all__ = [
    "PolyRing",
    "Poly",
    "RatFunc",
    "DivisionByZero",
    "partial",
    "parse_expr",
    "is_coeff",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class DivisionByZero(ZeroDivisionError):
    pass


def _grlex_key(exps):
    return (sum(exps), exps)


class PolyRing:
    """The ring Q[u^1..u^m] together with its field of fractions."""

    __slots__ = ("names", "_index")

    def __init__(self, names=()):
        names = tuple(names)
        for name in names:
            if not isinstance(name, str) or not _IDENT.match(name):
                raise ValueError(f"invalid coordinate name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def nvars(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(("PolyRing", self.names))

    def __repr__(self):
        return f"PolyRing({list(self.names)!r})"

    @property
    def zero(self):
        return Poly(self, {})

    @property
    def one(self):
        return self.const(1)

    def const(self, value):
        value = Fraction(value)
        return Poly(self, {(0,) * self.nvars: value} if value else {})

    def index(self, var):
        """Index of a coordinate given by name or by 0-based position."""
        if isinstance(var, str):
            try:
                return self._index[var]
            except KeyError:
                raise ValueError(f"unknown coordinate {var!r}") from None
        if not 0 <= var < self.nvars:
            raise ValueError(f"coordinate index {var} out of range for {self.nvars} coordinates")
        return var

    def gen(self, var):
        i = self.index(var)
        exps = tuple(1 if k == i else 0 for k in range(self.nvars))
        return Poly(self, {exps: Fraction(1)})

    @property
    def gens(self):
        return tuple(self.gen(i) for i in range(self.nvars))

    def __call__(self, value):
        """Coerce ``value`` (int, Fraction, str, or element) into this ring."""
        if isinstance(value, (Poly, RatFunc)):
            if value.ring != self:
                raise ValueError(f"element of {value.ring!r} is not in {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, Fraction)):
            return self.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def parse(self, src):
        return parsing.parse(src, _CoeffOps(self))


def is_coeff(value):
    return isinstance(value, (Poly, RatFunc))


def _add_terms(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mul_terms(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple([x + y for x, y in zip(e1, e2)]) if e1 else e1
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                del out[e]
    return out


class Poly:
    """A polynomial with rational coefficients; immutable."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        # callers guarantee: no zero coefficients, exponent tuples of length m
        self.ring = ring
        self.terms = terms

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, (Poly, RatFunc)):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    # -- predicates ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        """The rational value of a constant polynomial."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self):
        """(exponents, coefficient) of the grlex-leading term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if isinstance(other, RatFunc):
            return other + self
        return Poly(self.ring, _add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if isinstance(other, RatFunc):
            return -other + self
        return Poly(self.ring, _add_terms(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly(self.ring, {})
            return Poly(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if isinstance(other, RatFunc):
            return other * self
        return Poly(self.ring, _mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other:
            raise DivisionByZero(f"division of {self} by zero")
        if isinstance(other, RatFunc):
            return RatFunc.build(self * other.den, other.num)
        if other.is_constant():
            inv = 1 / other.constant_value()
            return Poly(self.ring, {e: c * inv for e, c in self.terms.items()})
        return RatFunc.build(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, RatFunc):
            return False
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash(frozenset(self.terms.items()))

    # -- calculus -----------------------------------------------------------
    def partial(self, var):
        i = self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return Poly(self.ring, out)

    # -- printing -----------------------------------------------------------
    def _monomial_str(self, e):
        parts = []
        for name, k in zip(self.ring.names, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = self._monomial_str(e)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not out:
                out.append(body if c > 0 else "-" + body)
            else:
                out.append((" + " if c > 0 else " - ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def is_monomial(self):
        return len(self.terms) <= 1


# -- rational functions --------------------------------------------------------

@lru_cache(maxsize=None)
def _sympy_ring(names):
    from sympy.polys.domains import QQ
    from sympy.polys.orderings import grlex
    from sympy.polys.rings import ring

    return ring(",".join(names), QQ, grlex)[0], QQ


def _to_sympy(p):
    R, QQ = _sympy_ring(p.ring.names)
    return R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in p.terms.items()})


def _from_sympy(ring, sp):
    return Poly(ring, {tuple(e): Fraction(int(c.numerator), int(c.denominator))
                       for e, c in sp.items()})


def _cancel(num, den):
    """Remove the polynomial gcd of num and den (exact; backed by sympy)."""
    if den.is_constant() or num.is_constant():
        return num, den
    _, a, b = _to_sympy(num).cofactors(_to_sympy(den))
    return _from_sympy(num.ring, a), _from_sympy(num.ring, b)


class RatFunc:
    """A reduced quotient of polynomials with monic (grlex) denominator.

    Use :meth:`build`; it returns a plain :class:`Poly` whenever the
    quotient is a polynomial.
    """

    __slots__ = ("ring", "num", "den")

    def __init__(self, num, den):
        self.ring = num.ring
        self.num = num
        self.den = den

    @staticmethod
    def build(num, den):
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return num.ring.zero
        if den.is_constant():
            return num * (1 / den.constant_value())
        num, den = _cancel(num, den)
        lc = den.leading()[1]
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        if den.is_constant():
            return num
        return RatFunc(num, den)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other.num, other.den
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other, self.ring.one
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other), self.ring.one
        return None

    def __bool__(self):
        return True

    def is_constant(self):
        return False

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if d2 == self.den:
            return RatFunc.build(self.num + n2, self.den)
        return RatFunc.build(self.num * d2 + n2 * self.den, self.den * d2)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if d2 == self.den:
            return RatFunc.build(self.num - n2, self.den)
        return RatFunc.build(self.num * d2 - n2 * self.den, self.den * d2)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        return RatFunc.build(self.num * n2, self.den * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if not n2:
            raise DivisionByZero(f"division of {self} by zero")
        return RatFunc.build(self.num * d2, self.den * n2)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc.build(o[0] * self.den, o[1] * self.num)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return RatFunc(self.num ** k, self.den ** k) if k else self.ring.one

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.ring == other.ring and self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((hash(self.num), hash(self.den)))

    def partial(self, var):
        n, d = self.num, self.den
        return RatFunc.build(n.partial(var) * d - n * d.partial(var), d * d)

    def __str__(self):
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"


def partial(f, var):
    """Formal partial derivative of ``f`` by a coordinate (name or 0-based index)."""
    return f.partial(var)


def parse_expr(src, ring):
    """Parse an expression over the coordinates of ``ring``.

    ``ring`` may also be given as a list of coordinate names.
    """
    if not isinstance(ring, PolyRing):
        ring = PolyRing(ring)
    return ring.parse(src)


class _CoeffOps:
    def __init__(self, ring):
        self.ring = ring

    def number(self, k):
        return self.ring.const(k)

    def name(self, text, src, pos):
        try:
            return self.ring.gen(self.ring._index[text])
        except KeyError:
            raise parsing.UnknownVariable(text, src, pos) from None

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b, pos):
        return a * b

    def div(self, a, b, pos):
        return a / b

    def pow(self, a, k, pos):
        return a ** k

    def wedge(self, a, b, pos):
        raise parsing.ExpressionSyntaxError("'/\\' is not allowed in a coefficient", "", pos)
