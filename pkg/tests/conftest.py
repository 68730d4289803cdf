from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from fanolinks.qpoly import QPoly

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

ZU = ("z", "u")
XYZU = ("x", "y", "z", "u")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)
nonzero = rationals.filter(bool)


def polys(variables=XYZU, max_exp=4, max_terms=8):
    n = len(variables)
    exps = st.tuples(*[st.integers(0, max_exp)] * n)
    return st.dictionaries(exps, nonzero, max_size=max_terms).map(lambda t: QPoly(variables, t))


def binary_forms(degree, min_terms=1):
    """Homogeneous forms of the given degree in (z, u)."""
    return st.lists(rationals, min_size=degree + 1, max_size=degree + 1).map(
        lambda cs: QPoly(ZU, {(degree - i, i): c for i, c in enumerate(cs)})
    ).filter(lambda p: len(p) >= min_terms)


def P(text, variables=XYZU):
    from fanolinks.qpoly import parse_poly

    return parse_poly(text, variables)


def Q(n, d=1):
    return Fraction(n, d)


@pytest.fixture(scope="session")
def records_168():
    from fanolinks.families import enumerate_families

    return enumerate_families(168)


def stratum_oracle(F, weights):
    """Quotient-point count per index on an explicit hypersurface, by floating-point roots.

    Vertices count when F vanishes there and some x_i^k x_j term keeps the point
    quasi-smooth. A line with stabilizer r contributes its distinct nonzero
    roots in x_i (x_j = 1) divided by the orbit size a_j / r.
    """
    from collections import Counter
    from itertools import combinations
    from math import gcd

    import numpy as np

    counts = Counter()
    n = len(weights)
    for i in range(n):
        a = weights[i]
        on = not any(e[i] * a == sum(k * w for k, w in zip(e, weights)) for e in F.terms)
        smooth = any(sum(e) - e[i] == 1 for e in F.terms if e[i])
        if a > 1 and on and smooth:
            counts[a] += 1
    for i, j in combinations(range(n), 2):
        r = gcd(weights[i], weights[j])
        if r == 1 or any(weights[k] % r == 0 for k in range(n) if k not in (i, j)):
            continue
        coeffs = {}
        for e, c in F.terms.items():
            if all(e[k] == 0 for k in range(n) if k not in (i, j)):
                coeffs[e[i]] = coeffs.get(e[i], 0) + float(c)
        if not coeffs:
            continue
        poly = np.zeros(max(coeffs) + 1)
        for k, c in coeffs.items():
            poly[k] = c
        roots = [z for z in np.roots(poly[::-1]) if abs(z) > 1e-9]
        distinct = []
        for z in roots:
            if all(abs(z - y) > 1e-6 for y in distinct):
                distinct.append(z)
        orbit = weights[j] // r
        assert len(distinct) % orbit == 0
        if len(distinct):
            counts[r] += len(distinct) // orbit
    return counts
