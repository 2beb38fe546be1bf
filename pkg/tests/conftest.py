"""Shared corpus builders and independent oracles for the test suite.

Oracles here avoid the code paths they check: Hilbert-Samuel dimensions come
from monomial counting or a closed form, directrix spaces from translation
tests and subspace search, 2-D vertex minimization from a staircase scan.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from hironaka.poly import Polynomial
from hironaka.pairs import Component, Pair


# ---------------------------------------------------------------------------
# Deterministic random polynomials and pairs


def random_polynomial(
    rng: random.Random,
    nvars: int,
    max_degree: int = 4,
    max_terms: int = 5,
    min_order: int = 0,
    coeff_bound: int = 4,
) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        while True:
            exps = tuple(rng.randint(0, max_degree) for _ in range(nvars))
            if min_order <= sum(exps) <= max_degree:
                break
        c = 0
        while c == 0:
            c = rng.randint(-coeff_bound, coeff_bound)
        terms[exps] = Fraction(c)
    poly = Polynomial(nvars, terms)
    if poly.is_zero():
        return random_polynomial(rng, nvars, max_degree, max_terms, min_order, coeff_bound)
    return poly


def random_singular_pair(rng: random.Random, nvars: int, max_components: int = 2) -> Pair:
    """A pair that is singular at the origin: each generator's order is
    forced up to the component weight by multiplying with variables."""
    comps = []
    for _ in range(rng.randint(1, max_components)):
        b = rng.randint(1, 3)
        gens = []
        for _ in range(rng.randint(1, 2)):
            g = random_polynomial(rng, nvars, max_degree=b + 2, min_order=1)
            while min(sum(e) for e in g.terms) < b:
                g = g * Polynomial.variable(nvars, rng.randrange(nvars))
            gens.append(g)
        comps.append(Component(tuple(gens), Fraction(b)))
    return Pair(tuple(comps))


# ---------------------------------------------------------------------------
# Hilbert-Samuel oracles


def monomials_below(nvars: int, k: int):
    if nvars == 0:
        return [()] if k > 0 else []
    out = []
    for d in range(k):
        out.extend(_exps_of_degree(nvars, d))
    return out


def _exps_of_degree(nvars: int, d: int):
    if nvars == 1:
        yield (d,)
        return
    for e in range(d + 1):
        for rest in _exps_of_degree(nvars - 1, d - e):
            yield (e,) + rest


def hs_monomial_oracle(gen_exponents, nvars: int, k: int) -> int:
    """dim of the quotient by a monomial ideal: count monomials of degree
    below k not divisible by any generator exponent."""
    count = 0
    for m in monomials_below(nvars, k):
        if not any(all(a >= b for a, b in zip(m, g)) for g in gen_exponents):
            count += 1
    return count


def hs_hypersurface_oracle(nvars: int, d: int, k: int) -> int:
    """Closed form for one generator of order d: multiplication by it is
    injective, so the rank of the truncated multiples is full."""
    total = math.comb(k - 1 + nvars, nvars)
    if k - 1 - d >= 0:
        total -= math.comb(k - 1 - d + nvars, nvars)
    return total


# ---------------------------------------------------------------------------
# 2-D staircase oracle for minimal vertex sets


def staircase_oracle(points):
    """Minimal generators of conv(points) + orthant in dimension 2:
    domination filter followed by a lower-convex-hull scan."""
    pts = sorted({(Fraction(a), Fraction(b)) for a, b in points})
    undominated = [
        p for p in pts
        if not any(q != p and q[0] <= p[0] and q[1] <= p[1] for q in pts)
    ]
    undominated.sort()
    hull = []
    for p in undominated:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            if cross <= 0:
                hull.pop()  # middle point on or above the chord: redundant
            else:
                break
        hull.append(p)
    return sorted(hull)


# ---------------------------------------------------------------------------
# Fixtures


@pytest.fixture
def rng():
    return random.Random(20240811)
