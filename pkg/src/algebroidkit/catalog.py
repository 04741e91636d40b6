"""Builders for the example algebroids and bivectors shipped as the corpus.

The JSON files under ``corpus/`` are the canonical dumps of these builders.
"""

from __future__ import annotations

from fractions import Fraction

from .algebroid import LieAlgebroid, lie_algebra
from .coeffring import PolyRing
from .poisson import PoissonBivector

__all__ = [
    "aff1",
    "heisenberg3",
    "sl2",
    "r3",
    "abelian",
    "tangent2",
    "aff1_action",
    "aff1_broken",
    "poisson_symplectic2",
    "poisson_xdxdy",
    "poisson_broken3",
    "VALID_ALGEBROIDS",
    "VALID_BIVECTORS",
    "BROKEN",
    "builders",
]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _with_metric(E, metric):
    E.metric = tuple(tuple(E.ring(v) for v in row) for row in metric)
    return E


def aff1():
    """The affine Lie algebra of the line: [e1, e2] = e2."""
    return _with_metric(lie_algebra(2, {(0, 1): [0, 1]}, name="aff1"), _identity(2))


def heisenberg3():
    return _with_metric(lie_algebra(3, {(0, 1): [0, 0, 1]}, name="heisenberg3"), _identity(3))


def sl2():
    """sl(2) with e1, e2, e3 = e, f, h: [e,f] = h, [h,e] = 2e, [h,f] = -2f."""
    E = lie_algebra(3, {(0, 1): [0, 0, 1], (0, 2): [-2, 0, 0], (1, 2): [0, 2, 0]}, name="sl2")
    return _with_metric(E, _identity(3))


def r3(lam=Fraction(1, 2)):
    """Solvable r_3(lam): [e1, e2] = e2, [e1, e3] = lam e3."""
    lam = Fraction(lam)
    E = lie_algebra(3, {(0, 1): [0, 1, 0], (0, 2): [0, 0, lam]}, name="r3")
    return _with_metric(E, _identity(3))


def abelian(k=4):
    return _with_metric(lie_algebra(k, {}, name=f"abelian{k}"), _identity(k))


def tangent2():
    """TM over the plane with metric diag(1, 1 + x^2)."""
    ring = PolyRing(["x", "y"])
    E = LieAlgebroid(ring, ["Dx", "Dy"], [[1, 0], [0, 1]], {}, coframe=["dx", "dy"], name="tangent2")
    return _with_metric(E, [[1, 0], [0, "x^2 + 1"]])


def aff1_action():
    """Action algebroid of aff(1) on the line: rho(e1) = -x d/dx, rho(e2) = d/dx."""
    ring = PolyRing(["x"])
    E = LieAlgebroid(ring, ["e1", "e2"], [["-x"], [1]], {(0, 1): [0, 1]}, name="aff1_action")
    return _with_metric(E, _identity(2))


def aff1_broken():
    """aff1_action with [e1, e2] doubled, so the anchor is no longer a morphism."""
    ring = PolyRing(["x"])
    return LieAlgebroid(ring, ["e1", "e2"], [["-x"], [1]], {(0, 1): [0, 2]}, name="aff1_broken")


def poisson_symplectic2():
    P = PoissonBivector.from_upper(["x", "y"], {(0, 1): 1})
    P.name = "poisson_symplectic2"
    return P


def poisson_xdxdy():
    P = PoissonBivector.from_upper(["x", "y"], {(0, 1): "x"})
    P.name = "poisson_xdxdy"
    return P


def poisson_broken3():
    """P^12 = y, P^13 = 0, P^23 = x: fails the Jacobi identity."""
    P = PoissonBivector.from_upper(["x", "y", "z"], {(0, 1): "y", (1, 2): "x"})
    P.name = "poisson_broken3"
    return P


VALID_ALGEBROIDS = ("aff1", "heisenberg3", "sl2", "r3", "abelian4", "tangent2", "aff1_action")
VALID_BIVECTORS = ("poisson_symplectic2", "poisson_xdxdy")
BROKEN = ("aff1_broken", "poisson_broken3")


def builders():
    """Corpus entry name -> zero-argument builder."""
    return {
        "aff1": aff1,
        "heisenberg3": heisenberg3,
        "sl2": sl2,
        "r3": r3,
        "abelian4": abelian,
        "tangent2": tangent2,
        "aff1_action": aff1_action,
        "aff1_broken": aff1_broken,
        "poisson_symplectic2": poisson_symplectic2,
        "poisson_xdxdy": poisson_xdxdy,
        "poisson_broken3": poisson_broken3,
    }
