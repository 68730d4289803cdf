"""Quasi-smooth terminal Fano 3-fold weighted hypersurfaces: checks, baskets, search."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .ambient import QuotientType, gcd_all, normalize_quotient_type, singular_strata, wellformed_wps
from .errors import InputError, NonTerminalError
from .qpoly import QPoly, dehomogenize, squarefree_decomposition

REID_BOUND = 24


@dataclass(frozen=True, order=True)
class QuotSing:
    r: int
    a: int
    multiplicity: int = 1

    @property
    def kind(self) -> QuotientType:
        return QuotientType(self.r, self.a)

    def __str__(self) -> str:
        s = str(self.kind)
        return s if self.multiplicity == 1 else f"{s}x{self.multiplicity}"


@dataclass(frozen=True)
class Basket:
    entries: tuple[QuotSing, ...] = ()

    @classmethod
    def from_types(cls, types: Iterable[QuotientType]) -> "Basket":
        counts = Counter(types)
        return cls(tuple(QuotSing(t.r, t.a, m) for t, m in sorted(counts.items())))

    def types(self) -> set[QuotientType]:
        return {e.kind for e in self.entries}

    def total(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def __str__(self) -> str:
        return "{" + ", ".join(str(e) for e in self.entries) + "}"

    def to_json(self) -> list[dict]:
        return [{"r": e.r, "a": e.a, "mult": e.multiplicity} for e in self.entries]


@dataclass(frozen=True)
class FamilyRecord:
    d: int
    weights: tuple[int, ...]
    index: int
    A3: Fraction
    minusK3: Fraction
    basket: Basket

    def to_json(self) -> dict:
        return {
            "degree": self.d,
            "weights": list(self.weights),
            "index": self.index,
            "A3": rational_text(self.A3),
            "minusK3": rational_text(self.minusK3),
            "basket": self.basket.to_json(),
        }


def rational_text(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# combinatorial conditions

def condition_check(d: int, weights: Sequence[int]) -> dict[str, bool]:
    a = tuple(weights)
    return {
        "ascending": list(a) == sorted(a),
        "top_weight_below_degree": max(a) < d,
        "wellformed": all(gcd_all(s) == 1 for s in combinations(a, len(a) - 1)),
        "degree_below_weight_sum": d < sum(a),
    }


@lru_cache(maxsize=None)
def _representable(n: int, gens: tuple[int, ...]) -> bool:
    """Whether n is a non-negative integer combination of ``gens``."""
    if n < 0:
        return False
    if n == 0:
        return True
    if not gens:
        return False
    reach = bytearray(n + 1)
    reach[0] = 1
    for g in gens:
        for v in range(g, n + 1):
            if reach[v - g]:
                reach[v] = 1
    return bool(reach[n])


def general_qsmooth(d: int, weights: Sequence[int]) -> bool:
    """Subset criterion for quasi-smoothness of a general member of degree d."""
    a = tuple(weights)
    if d in a:
        return False
    n = len(a)
    for k in range(1, n + 1):
        for sub in combinations(range(n), k):
            gens = tuple(sorted({a[i] for i in sub}))
            if _representable(d, gens):
                continue
            outside = [e for e in range(n) if e not in sub and _representable(d - a[e], gens)]
            if len(outside) < k:
                return False
    return True


def coordinate_point_type(d: int, weights: Sequence[int], i: int) -> QuotientType | None:
    """Type of the coordinate point p_i on a general member, or None if absent or smooth."""
    a = tuple(weights)
    if a[i] == 1 or d % a[i] == 0:
        return None
    tangents = [j for j in range(len(a)) if j != i and d - a[j] > 0 and (d - a[j]) % a[i] == 0]
    if not tangents:
        raise NonTerminalError(f"coordinate point {i} is not quasi-smooth")
    kinds = set()
    for j in tangents:
        rest = [a[k] for k in range(len(a)) if k not in (i, j)]
        kinds.add(normalize_quotient_type(a[i], rest))
    if len(kinds) != 1:
        raise NonTerminalError(f"tangent choices at point {i} disagree: {kinds}")
    kind = kinds.pop()
    if not isinstance(kind, QuotientType):
        raise NonTerminalError(f"point {i} of type 1/{a[i]}{tuple(rest)} is {kind}")
    return kind


def line_monomial_count(d: int, ai: int, aj: int) -> int:
    return sum(1 for p in range(d // ai + 1) if (d - p * ai) % aj == 0)


def basket(d: int, weights: Sequence[int]) -> Basket:
    """Basket of a general quasi-smooth member; raises if it is not terminal."""
    a = tuple(weights)
    if not wellformed_wps(a):
        raise InputError(f"weights {a} are not well-formed")
    types: list[QuotientType] = []
    for i in range(len(a)):
        t = coordinate_point_type(d, a, i)
        if t is not None:
            types.append(t)
    for s in singular_strata(a):
        if len(s.indices) == 1:
            continue
        if len(s.indices) >= 3:
            raise NonTerminalError(f"stratum {s.indices} meets the member in a curve of singularities")
        i, j = s.indices
        count = line_monomial_count(d, a[i], a[j])
        if count == 0:
            raise NonTerminalError(f"the line {s.indices} lies in the member")
        rest = [a[k] for k in range(len(a)) if k not in (i, j)]
        kind = normalize_quotient_type(s.r, rest)
        if count > 1 and not isinstance(kind, QuotientType):
            raise NonTerminalError(f"points on line {s.indices} of type 1/{s.r}{tuple(rest)} are {kind}")
        types.extend([kind] * (count - 1))
    return Basket.from_types(types)


def reid_sum(b: Basket) -> Fraction:
    return sum((e.multiplicity * (e.r - Fraction(1, e.r)) for e in b.entries), Fraction(0))


def invariants(d: int, weights: Sequence[int]) -> tuple[int, Fraction, Fraction]:
    """(index, A^3, (-K)^3) of a degree-d hypersurface."""
    a = tuple(weights)
    iota = sum(a) - d
    A3 = Fraction(d, prod(a))
    return iota, A3, iota ** 3 * A3


def family_record(d: int, weights: Sequence[int]) -> FamilyRecord:
    a = tuple(weights)
    checks = condition_check(d, a)
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise InputError(f"({d}, {a}) fails {', '.join(failed)}")
    if not general_qsmooth(d, a):
        raise InputError(f"a general member of degree {d} in P{a} is not quasi-smooth")
    b = basket(d, a)
    iota, A3, K3 = invariants(d, a)
    return FamilyRecord(d, a, iota, A3, K3, b)


def try_family(d: int, weights: Sequence[int]) -> FamilyRecord | None:
    try:
        return family_record(d, weights)
    except (InputError, NonTerminalError):
        return None


# explicit members

@dataclass(frozen=True)
class PointReport:
    """Outcome of the coordinate-stratum scan of an explicit member."""

    basket: Basket
    non_quasismooth: tuple[str, ...] = ()
    multiple_roots: tuple[tuple[str, ...], ...] = ()


def _pure_power_coeff(F: QPoly, i: int, k: int) -> Fraction:
    e = [0] * len(F.variables)
    e[i] = k
    return F.coeff(e)


def _linear_terms(F: QPoly, weights: Sequence[int], i: int) -> list[int]:
    """Variables j with a monomial x_i^k * x_j in F."""
    out = []
    for e in F.terms:
        if sum(e) - e[i] == 1 and e[i] >= 1:
            out.append(next(j for j, v in enumerate(e) if v and j != i))
    return sorted(set(out))


def explicit_basket(F: QPoly, weights: Sequence[int]) -> PointReport:
    """Quotient points of an explicit hypersurface on the coordinate strata."""
    a = tuple(weights)
    names = F.variables
    d = _degree(F, a)
    types: list[QuotientType] = []
    bad: list[str] = []
    multiple: list[tuple[str, ...]] = []
    for i in range(len(a)):
        if d % a[i] == 0 and _pure_power_coeff(F, i, d // a[i]):
            continue
        js = _linear_terms(F, a, i)
        if not js:
            bad.append(names[i])
            continue
        if a[i] == 1:
            continue
        kinds = {normalize_quotient_type(a[i], [a[k] for k in range(len(a)) if k not in (i, j)]) for j in js}
        kind = _single_kind(kinds, names[i])
        types.append(kind)
    for s in singular_strata(a):
        if len(s.indices) == 1:
            continue
        if len(s.indices) >= 3:
            raise NonTerminalError(f"stratum {s.names} meets the member in a curve")
        i, j = s.indices
        restricted = _restrict(F, (i, j))
        if restricted.is_zero():
            raise NonTerminalError(f"the line {s.names} lies in the member")
        roots, repeated = _torus_roots(restricted, a[i] // s.r, a[j] // s.r)
        if repeated:
            multiple.append(s.names)
        if roots:
            rest = [a[k] for k in range(len(a)) if k not in (i, j)]
            kind = _single_kind({normalize_quotient_type(s.r, rest)}, "/".join(s.names))
            types.extend([kind] * roots)
    return PointReport(Basket.from_types(types), tuple(bad), tuple(multiple))


def _single_kind(kinds: set, where: str) -> QuotientType:
    if len(kinds) != 1:
        raise NonTerminalError(f"tangent choices at {where} disagree: {kinds}")
    kind = next(iter(kinds))
    if not isinstance(kind, QuotientType):
        raise NonTerminalError(f"point {where} is {kind}")
    return kind


def _degree(F: QPoly, a: Sequence[int]) -> int:
    degs = {sum(k * w for k, w in zip(e, a)) for e in F.terms}
    if len(degs) != 1:
        raise InputError("equation is not quasi-homogeneous")
    return degs.pop()


def _restrict(F: QPoly, keep: tuple[int, ...]) -> QPoly:
    names = F.variables
    zero = {names[k]: 0 for k in range(len(names)) if k not in keep}
    return F.specialize(zero)


def _torus_roots(binary: QPoly, wi: int, wj: int) -> tuple[int, bool]:
    """Distinct roots of a binary form in x_i^wj, x_j^wi away from both vertices.

    The form is rewritten in s = x_i^wj and t = x_j^wi (the line is P^1 in
    these coordinates); returns (count, whether a root is repeated).
    """
    # a vertex factor x_i^a x_j^b does not affect roots in the torus
    p0 = min(p for p, _ in binary.terms)
    q0 = min(q for _, q in binary.terms)
    terms = {}
    for (p, q), c in binary.terms.items():
        p, q = p - p0, q - q0
        if p % wj or q % wi:
            raise InputError("restricted form is not a polynomial in the line coordinates")
        terms[(p // wj, q // wi)] = c
    form = QPoly(("s", "t"), terms)
    coeffs = dehomogenize(form)
    lo = next(k for k, c in enumerate(coeffs) if c)
    torus = coeffs[lo:]
    factors = squarefree_decomposition(torus)
    count = sum(len(f) - 1 for f, _ in factors)
    return count, any(m > 1 for _, m in factors)


def ci_basket(equations: Sequence[QPoly], weights: Sequence[int]) -> PointReport:
    """Coordinate-strata scan for a codimension-2 complete intersection."""
    a = tuple(weights)
    names = equations[0].variables
    degs = [_degree(G, a) for G in equations]
    types: list[QuotientType] = []
    bad: list[str] = []
    for i in range(len(a)):
        if any(d % a[i] == 0 and _pure_power_coeff(G, i, d // a[i]) for G, d in zip(equations, degs)):
            continue
        jac = [{j: _linear_coeff(G, i, j) for j in range(len(a)) if j != i} for G in equations]
        pairs = [(j, k) for j in jac[0] for k in jac[1] if j != k
                 and jac[0][j] * jac[1][k] - jac[0][k] * jac[1][j] != 0]
        if not pairs:
            bad.append(names[i])
            continue
        if a[i] == 1:
            continue
        kinds = {normalize_quotient_type(a[i], [a[m] for m in range(len(a)) if m not in (i, j, k)])
                 for j, k in pairs}
        types.append(_single_kind(kinds, names[i]))
    for s in singular_strata(a):
        if len(s.indices) == 1:
            continue
        if len(s.indices) >= 3:
            raise NonTerminalError(f"stratum {s.names} needs a finer analysis")
        restricted = [_restrict(G, s.indices) for G in equations]
        if _common_torus_roots(restricted, [a[k] // s.r for k in s.indices]):
            raise InputError(f"points inside the line {s.names} are undetermined by this scan")
    return PointReport(Basket.from_types(types), tuple(bad))


def _linear_coeff(G: QPoly, i: int, j: int) -> Fraction:
    total = Fraction(0)
    for e, c in G.terms.items():
        if e[j] == 1 and sum(e) - e[i] == 1:
            total += c
    return total


def _common_torus_roots(forms: Sequence[QPoly], w: Sequence[int]) -> bool:
    """Whether the restricted binary forms share a root away from both vertices."""
    from .qpoly import _ugcd

    common = None
    for f in forms:
        if f.is_zero():
            continue
        terms = {(p // w[1], q // w[0]): c for (p, q), c in f.terms.items()}
        coeffs = dehomogenize(QPoly(("s", "t"), terms))
        lo = next(k for k, c in enumerate(coeffs) if c)
        torus = coeffs[lo:]
        common = torus if common is None else _ugcd(common, torus)
    return common is None or len(common) > 1


# enumeration

SMALL_WEIGHTS = tuple(range(1, REID_BOUND + 1))


@lru_cache(maxsize=None)
def _small_tuples(k: int) -> np.ndarray:
    rows = list(combinations_with_replacement(SMALL_WEIGHTS, k))
    return np.array(rows, dtype=np.int64).reshape(len(rows), k)


def _candidates_for_degree(d: int, bound: int) -> np.ndarray:
    """Ascending weight tuples for degree d that survive the cheap filters.

    A weight above the largest possible quotient index must divide d, since
    otherwise its coordinate point is a quotient point of that index on the
    member.
    """
    big = [m for m in range(REID_BOUND + 1, min(bound, d - 1) + 1) if d % m == 0]
    chunks = []
    for nbig in range(6):
        small = _small_tuples(5 - nbig)
        small = small[(small[:, -1] < d) & (small[:, -1] <= bound)] if small.shape[1] else small
        if nbig == 0:
            rows = small
        else:
            if not big:
                continue
            bigs = np.array(list(combinations_with_replacement(big, nbig)), dtype=np.int64)
            rows = np.concatenate(
                [np.repeat(small, len(bigs), axis=0), np.tile(bigs, (len(small), 1))], axis=1)
        if len(rows) == 0:
            continue
        rows = rows[rows.sum(axis=1) > d]
        if len(rows) == 0:
            continue
        ok = np.ones(len(rows), dtype=bool)
        for skip in range(5):
            cols = [c for c in range(5) if c != skip]
            ok &= np.gcd.reduce(rows[:, cols], axis=1) == 1
        rows = rows[ok]
        ok = np.ones(len(rows), dtype=bool)
        for i in range(5):
            ai = rows[:, i]
            hit = d % ai == 0
            for j in range(5):
                if j != i:
                    hit |= (d - rows[:, j]) % ai == 0
            ok &= hit
        chunks.append(rows[ok])
    if not chunks:
        return np.zeros((0, 5), dtype=np.int64)
    return np.concatenate(chunks)


def _search_degree(args: tuple[int, int]) -> list[FamilyRecord]:
    d, bound = args
    out = []
    seen = set()
    for row in _candidates_for_degree(d, bound):
        a = tuple(int(x) for x in row)
        if a in seen:
            continue
        seen.add(a)
        rec = try_family(d, a)
        if rec is not None and reid_sum(rec.basket) <= REID_BOUND:
            out.append(rec)
    return out


@dataclass(frozen=True)
class EnumerateConfig:
    bound: int = 168
    workers: int = 0  # 0 means serial


def enumerate_families(bound: int = 168, workers: int | None = None) -> list[FamilyRecord]:
    """All families with weights at most ``bound``, sorted by (index, degree, weights)."""
    if bound < 1:
        raise InputError("bound must be positive")
    if workers is None:
        workers = int(os.environ.get("FANOLINKS_WORKERS", "0"))
    degrees = [(d, bound) for d in range(2, 5 * bound)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_search_degree, degrees, chunksize=8))
    else:
        chunks = [_search_degree(x) for x in degrees]
    records = [r for chunk in chunks for r in chunk]
    return sorted(records, key=lambda r: (r.index, r.d, r.weights))
