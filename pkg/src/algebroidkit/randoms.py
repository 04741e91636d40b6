"""Seeded random elements for property checks."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
import random

from .coeffring import Poly
from .exterior import Form, Multivector

DEFAULT_SEED = 20240611


def random_poly(ring, rng, max_degree=2, max_terms=2, coeff_range=3):
    terms = {}
    m = ring.nvars
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * m
        for _ in range(rng.randint(0, max_degree) if m else 0):
            exps[rng.randrange(m)] += 1
        c = Fraction(rng.randint(-coeff_range, coeff_range), rng.choice((1, 1, 2)))
        if c:
            terms[tuple(exps)] = terms.get(tuple(exps), 0) + c
    return Poly(ring, {e: c for e, c in terms.items() if c})


def _random_graded(kind, ring, n, degree, rng, max_terms, **kw):
    monos = list(combinations(range(n), degree))
    if not monos:
        return kind.zero(ring, n)
    chosen = rng.sample(monos, min(len(monos), rng.randint(1, max_terms)))
    return kind(ring, n, {I: random_poly(ring, rng, **kw) for I in chosen})


def random_multivector(E, degree, rng, max_terms=3, **kw):
    return _random_graded(Multivector, E.ring, E.n, degree, rng, max_terms, **kw)


def random_form(E, degree, rng, max_terms=3, **kw):
    return _random_graded(Form, E.ring, E.n, degree, rng, max_terms, **kw)


def rng_for(seed=None):
    return random.Random(DEFAULT_SEED if seed is None else seed)
