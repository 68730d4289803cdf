"""Sparse polynomials with exact rational coefficients over named variables.

Besides ring arithmetic the module provides weight filtrations, fractional
chart substitutions and a few binary-form utilities (gcd, pure-power and
square detection) that only need computations over the rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InputError, ParseError, SubstitutionError, UndefinedWeightError

Rational = Fraction
Exponents = tuple[int, ...]
WeightVec = Sequence["int | Fraction"]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


class QPoly:
    """Immutable sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponents, object] | None = None):
        vs = tuple(variables)
        if len(set(vs)) != len(vs):
            raise InputError(f"duplicate variable names in {vs}")
        n = len(vs)
        clean: dict[Exponents, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise InputError(f"exponent vector {exps} does not match variables {vs}")
            if any(e < 0 for e in exps):
                raise InputError(f"negative exponent in {exps}")
            c = _frac(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self._vars = vs
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, variables: Sequence[str]) -> "QPoly":
        return cls(variables)

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "QPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "QPoly":
        vs = tuple(variables)
        return cls(vs, {tuple(int(v == name) for v in vs): 1}) if name in vs else _missing(name, vs)

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Mapping[str, int] | Sequence[int], c=1) -> "QPoly":
        vs = tuple(variables)
        return cls(vs, {_as_exps(vs, exps): c})

    # basic accessors
    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> dict[Exponents, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(sorted(self._terms.items(), key=_term_key))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, m: Mapping[str, int] | Sequence[int]) -> Fraction:
        return self._terms.get(_as_exps(self._vars, m), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self._vars), Fraction(0))

    def index(self, name: str) -> int:
        try:
            return self._vars.index(name)
        except ValueError:
            _missing(name, self._vars)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.index(name)
        return max((e[i] for e in self._terms), default=-1)

    def order_in(self, name: str) -> int:
        i = self.index(name)
        return min((e[i] for e in self._terms), default=-1)

    # arithmetic
    def _coerce(self, other) -> "QPoly":
        if isinstance(other, QPoly):
            if other._vars != self._vars:
                raise InputError(f"variable mismatch: {self._vars} vs {other._vars}")
            return other
        return QPoly.const(self._vars, _frac(other))

    def __add__(self, other) -> "QPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return QPoly(self._vars, out)

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "QPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "QPoly":
        if not isinstance(other, QPoly):
            c = _frac(other)
            return QPoly(self._vars, {e: c * v for e, v in self._terms.items()})
        other = self._coerce(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return QPoly(self._vars, out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QPoly":
        return self * (1 / _frac(other))

    def __pow__(self, k: int) -> "QPoly":
        if k < 0:
            raise InputError("negative power")
        result = QPoly.const(self._vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, QPoly):
            return self._vars == other._vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == QPoly.const(self._vars, other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"QPoly({self._vars}, {str(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # structural operations
    def diff(self, name: str) -> "QPoly":
        i = self.index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return QPoly(self._vars, out)

    def with_variables(self, variables: Sequence[str]) -> "QPoly":
        """Re-express over another variable list; dropped variables must be absent."""
        vs = tuple(variables)
        pos = []
        for i, v in enumerate(self._vars):
            if v in vs:
                pos.append(vs.index(v))
            elif any(e[i] for e in self._terms):
                raise InputError(f"variable {v} occurs and cannot be dropped")
            else:
                pos.append(None)
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(vs)
            for i, p in enumerate(pos):
                if p is not None:
                    ne[p] = e[i]
            out[tuple(ne)] = c
        return QPoly(vs, out)

    def rename(self, mapping: Mapping[str, str]) -> "QPoly":
        return QPoly([mapping.get(v, v) for v in self._vars], self._terms)

    def specialize(self, values: Mapping[str, object]) -> "QPoly":
        """Substitute rational constants for some variables and drop them."""
        keep = [v for v in self._vars if v not in values]
        idx = [self._vars.index(v) for v in keep]
        vals = [(self._vars.index(v), _frac(c)) for v, c in values.items() if v in self._vars]
        out: dict[Exponents, Fraction] = {}
        for e, c in self._terms.items():
            for i, val in vals:
                if e[i]:
                    c = c * val ** e[i]
            if c:
                ne = tuple(e[i] for i in idx)
                out[ne] = out.get(ne, 0) + c
        return QPoly(keep, out)

    def compose(self, images: Mapping[str, "QPoly"], variables: Sequence[str]) -> "QPoly":
        """Replace each variable by a polynomial over ``variables``."""
        vs = tuple(variables)
        imgs = []
        for v in self._vars:
            img = images.get(v)
            if img is None:
                img = QPoly.var(vs, v)
            imgs.append(img.with_variables(vs))
        powers: list[dict[int, QPoly]] = [{0: QPoly.const(vs, 1)} for _ in imgs]

        def power(i: int, k: int) -> QPoly:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * imgs[i]
            return cache[k]

        out = QPoly.zero(vs)
        acc: dict[Exponents, Fraction] = {}
        for e, c in self._terms.items():
            term = QPoly.const(vs, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term._terms.items():
                acc[te] = acc.get(te, 0) + tc
        return out + QPoly(vs, acc)

    def map_terms(self, keep) -> "QPoly":
        return QPoly(self._vars, {e: c for e, c in self._terms.items() if keep(e, c)})


def _missing(name: str, vs: tuple[str, ...]):
    raise InputError(f"unknown variable {name!r}; declared {vs}")


def _as_exps(vs: tuple[str, ...], m: Mapping[str, int] | Sequence[int]) -> Exponents:
    if isinstance(m, Mapping):
        for k in m:
            if k not in vs:
                _missing(k, vs)
        return tuple(int(m.get(v, 0)) for v in vs)
    m = tuple(int(e) for e in m)
    if len(m) != len(vs):
        raise InputError(f"exponent vector length {len(m)} does not match {len(vs)} variables")
    return m


def _term_key(item: tuple[Exponents, Fraction]):
    e = item[0]
    return (-sum(e), tuple(-x for x in e))


def format_poly(p: QPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.items():
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(p.variables, e) if k)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# weights and filtrations

def _wdot(e: Exponents, w: WeightVec) -> Fraction:
    return sum((Fraction(k) * Fraction(wi) for k, wi in zip(e, w)), Fraction(0))


def _check_weights(p: QPoly, w: WeightVec) -> None:
    if len(w) != len(p.variables):
        raise InputError(f"weight vector of length {len(w)} for {len(p.variables)} variables")


def coeff(p: QPoly, m: Mapping[str, int] | Sequence[int]) -> Fraction:
    return p.coeff(m)


def weight(p: QPoly, w: WeightVec) -> Fraction:
    """Minimum weight of a monomial of ``p``."""
    _check_weights(p, w)
    if p.is_zero():
        raise UndefinedWeightError("weight of the zero polynomial is undefined")
    return min(_wdot(e, w) for e in p.terms)


def weight_or_inf(p: QPoly, w: WeightVec) -> Fraction | float:
    return float("inf") if p.is_zero() else weight(p, w)


def filter_eq(p: QPoly, w: WeightVec, r) -> QPoly:
    _check_weights(p, w)
    r = Fraction(r)
    return p.map_terms(lambda e, c: _wdot(e, w) == r)


def filter_ge(p: QPoly, w: WeightVec, r) -> QPoly:
    _check_weights(p, w)
    r = Fraction(r)
    return p.map_terms(lambda e, c: _wdot(e, w) >= r)


def filter_le(p: QPoly, w: WeightVec, r) -> QPoly:
    _check_weights(p, w)
    r = Fraction(r)
    return p.map_terms(lambda e, c: _wdot(e, w) <= r)


def graded_pieces(p: QPoly, w: WeightVec) -> dict[Fraction, QPoly]:
    _check_weights(p, w)
    buckets: dict[Fraction, dict[Exponents, Fraction]] = {}
    for e, c in p.terms.items():
        buckets.setdefault(_wdot(e, w), {})[e] = c
    return {k: QPoly(p.variables, v) for k, v in sorted(buckets.items())}


def is_homogeneous(p: QPoly, w: WeightVec) -> bool:
    return len({_wdot(e, w) for e in p.terms}) <= 1


def homogeneous_degree(p: QPoly, w: WeightVec) -> Fraction:
    degs = {_wdot(e, w) for e in p.terms}
    if len(degs) != 1:
        raise InputError(f"polynomial is not quasi-homogeneous for weights {tuple(w)}")
    return degs.pop()


def piece_in_power_ideal(p: QPoly, variables: Iterable[str], k: int) -> bool:
    """True iff every monomial has total exponent >= k in ``variables``."""
    idx = [p.index(v) for v in variables]
    return all(sum(e[i] for i in idx) >= k for e in p.terms)


# fractional chart substitutions

@dataclass(frozen=True)
class PowerScaled:
    """A polynomial multiplied by ``aux ** power`` with rational ``power``."""

    poly: QPoly
    power: Fraction = Fraction(0)


def substitute(
    p: QPoly,
    rules: Mapping[str, PowerScaled],
    variables: Sequence[str],
    aux: str = "u",
    prefactor=Fraction(0),
) -> QPoly:
    """Compute ``aux**prefactor * p(rule images)`` over ``variables``.

    Each variable of ``p`` without a rule maps to itself. Every monomial must
    end up with a non-negative integral power of ``aux``.
    """
    vs = tuple(variables)
    if aux not in vs:
        raise InputError(f"auxiliary variable {aux!r} must be among the output variables")
    prefactor = Fraction(prefactor)
    imgs: list[PowerScaled] = []
    for v in p.variables:
        r = rules.get(v)
        if r is None:
            r = PowerScaled(QPoly.var(vs, v))
        imgs.append(PowerScaled(r.poly.with_variables(vs), Fraction(r.power)))
    den = lcm(prefactor.denominator, *(r.power.denominator for r in imgs))
    shift = prefactor * den
    steps = [r.power * den for r in imgs]
    aux_i = vs.index(aux)
    acc: dict[Exponents, Fraction] = {}
    cache: dict[tuple[int, int], QPoly] = {}

    def power(i: int, k: int) -> QPoly:
        key = (i, k)
        if key not in cache:
            cache[key] = QPoly.const(vs, 1) if k == 0 else power(i, k - 1) * imgs[i].poly
        return cache[key]

    for e, c in p.terms.items():
        num = shift + sum((k * s for k, s in zip(e, steps)), Fraction(0))
        if num.denominator != 1 or num.numerator % den:
            raise SubstitutionError(f"monomial {e} gets non-integral {aux}-exponent {num / den}")
        a = num.numerator // den
        if a < 0:
            raise SubstitutionError(f"monomial {e} gets negative {aux}-exponent {a}")
        term = QPoly.const(vs, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        for te, tc in term.terms.items():
            ne = list(te)
            ne[aux_i] += a
            ne = tuple(ne)
            acc[ne] = acc.get(ne, 0) + tc
    return QPoly(vs, acc)


def grave_transform(e: QPoly, degree: int, y: str = "y", x: str = "x", u: str = "u") -> QPoly:
    """Map ``e(y, x)`` of weights (3, 1) and given degree to ``u**(-m/3) e(y, u**(1/3))``."""
    if set(e.variables) - {y, x}:
        e = e.with_variables((y, x))
    e = e.with_variables((y, x))
    m = degree % 3
    out = {}
    for (j, i), c in e.terms.items():
        if 3 * j + i != degree:
            raise InputError(f"term {y}^{j}*{x}^{i} is not of degree {degree} for weights (3, 1)")
        out[(j, (i - m) // 3)] = c
    return QPoly((y, u), out)


# univariate helpers over Q; lists of coefficients, lowest degree first

def _trim(a: list[Fraction]) -> list[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _udivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _trim(q), _trim(a[: len(b) - 1])


def _umonic(a: list[Fraction]) -> list[Fraction]:
    return [c / a[-1] for c in a] if a else a


def _ugcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _udivmod(a, b)[1]
    return _umonic(a)


def _uderiv(a: list[Fraction]) -> list[Fraction]:
    return _trim([c * i for i, c in enumerate(a)][1:])


def _umul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def squarefree_decomposition(a: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: monic squarefree factors with their multiplicities."""
    a = _trim(list(a))
    if len(a) <= 1:
        return []
    out = []
    da = _uderiv(a)
    b = _ugcd(a, da)
    c = _udivmod(a, b)[0]
    d = _trim([x - y for x, y in _zip_pad(_udivmod(da, b)[0], _uderiv(c))])
    i = 1
    while len(c) > 1:
        g = _ugcd(c, d)
        if len(g) > 1:
            out.append((g, i))
        c = _udivmod(c, g)[0]
        d = _trim([x - y for x, y in _zip_pad(_udivmod(d, g)[0], _uderiv(c))])
        i += 1
    return out


def _zip_pad(a: list[Fraction], b: list[Fraction]):
    n = max(len(a), len(b))
    return zip(a + [Fraction(0)] * (n - len(a)), b + [Fraction(0)] * (n - len(b)))


def roots_with_multiplicity_at_least(a: list[Fraction], m: int) -> list[Fraction]:
    """Monic polynomial whose complex roots are the roots of ``a`` of multiplicity >= m."""
    out = [Fraction(1)]
    for f, k in squarefree_decomposition(a):
        if k >= m:
            out = _umul(out, f)
    return out


# binary forms: quasi-homogeneous in two variables with weights (wz, wu)

def _binary_parts(p: QPoly, weights: tuple[int, int]) -> tuple[int, int, list[Fraction]]:
    """Write ``p = z**a * u**b * G(z**s, u**t)`` and return (a, b, G(Z, 1)).

    Here s = wu/g and t = wz/g with g = gcd(wz, wu), so G is an ordinary
    binary form in Z = z**s and U = u**t with G(0, 1) != 0.
    """
    if len(p.variables) != 2:
        raise InputError(f"binary form expected, got variables {p.variables}")
    homogeneous_degree(p, weights)
    s = weights[1] // gcd(*weights)
    a = min(e[0] for e in p.terms)
    b = min(e[1] for e in p.terms)
    deg = (max(e[0] for e in p.terms) - a) // s
    coeffs = [Fraction(0)] * (deg + 1)
    for (i, _), c in p.terms.items():
        coeffs[(i - a) // s] += c
    return a, b, coeffs


def _rehomogenize(coeffs: list[Fraction], weights: tuple[int, int], variables: Sequence[str]) -> QPoly:
    g = gcd(*weights)
    s, t = weights[1] // g, weights[0] // g
    top = len(coeffs) - 1
    return QPoly(variables, {(s * i, t * (top - i)): c for i, c in enumerate(coeffs) if c})


def dehomogenize(p: QPoly, weights: tuple[int, int] = (1, 1)) -> list[Fraction]:
    """Coefficients of ``p`` in Z = z**(wu/g) after setting u = 1, lowest first."""
    a, _, q = _binary_parts(p, weights)
    s = weights[1] // gcd(*weights)
    if a % s:
        raise InputError("the z-power does not factor through the line coordinate")
    return [Fraction(0)] * (a // s) + q


def bf_gcd(p: QPoly, q: QPoly, weights: tuple[int, int] = (1, 1)) -> QPoly:
    """Gcd over Q of two binary forms, normalized to leading z-coefficient 1."""
    if p.is_zero() or q.is_zero():
        raise InputError("bf_gcd needs nonzero binary forms")
    if p.variables != q.variables:
        raise InputError("bf_gcd needs forms in the same two variables")
    return _bf_gcd(p, q, tuple(weights))


def _bf_gcd(p: QPoly, q: QPoly, weights: tuple[int, int]) -> QPoly:
    if p.is_zero():
        return _normalize_binary(q)
    if q.is_zero():
        return _normalize_binary(p)
    a1, b1, c1 = _binary_parts(p, weights)
    a2, b2, c2 = _binary_parts(q, weights)
    g = _rehomogenize(_ugcd(c1, c2), weights, p.variables)
    shared = QPoly.monomial(p.variables, (min(a1, a2), min(b1, b2)))
    return _normalize_binary(g * shared)


def _normalize_binary(p: QPoly) -> QPoly:
    lead = max(p.terms, key=lambda e: (e[0], -e[1]))
    return p / p.coeff(lead)


def binary_divides(d: QPoly, p: QPoly, weights: tuple[int, int] = (1, 1)) -> bool:
    """True iff the binary form ``d`` divides ``p`` (zero is divisible by anything)."""
    if p.is_zero():
        return True
    if d.is_zero():
        return False
    a1, b1, c1 = _binary_parts(d, weights)
    a2, b2, c2 = _binary_parts(p, weights)
    if a1 > a2 or b1 > b2:
        return False
    s = weights[1] // gcd(*weights)
    if (a2 - a1) % s:
        return False
    shifted = [Fraction(0)] * ((a2 - a1) // s) + c2
    return not _udivmod(shifted, c1)[1]


def is_power_of_linear(p: QPoly, k: int) -> QPoly | None:
    """Return a linear form ``l`` with ``p == c * l**k`` if one exists over Q-bar."""
    if p.is_zero():
        raise InputError("is_power_of_linear needs a nonzero form")
    deg = homogeneous_degree(p, (1, 1))
    if deg != k:
        raise InputError(f"form has degree {deg}, expected {k}")
    z, u = p.variables
    if k > 1:
        g = _bf_gcd(_bf_gcd(p, p.diff(z), (1, 1)), p.diff(u), (1, 1))
    else:
        g = QPoly.const(p.variables, 1)
    if homogeneous_degree(g, (1, 1)) != k - 1:
        return None
    lin = exact_divide(p, g)
    if lin is None:
        return None
    lin = _normalize_binary(lin)
    return lin if power_scalar(p, lin, k) is not None else None


def power_scalar(p: QPoly, lin: QPoly, k: int) -> Fraction | None:
    """The scalar ``c`` with ``p == c * lin**k``, if it exists."""
    pk = lin ** k
    lead = next(iter(pk.items()))[0]
    c = p.coeff(lead) / pk.coeff(lead)
    return c if p == pk * c else None


def binary_factor_count(p: QPoly, weights: tuple[int, int] = (1, 1)) -> tuple[int, bool]:
    """Number of irreducible factors over C with multiplicity, and whether all are simple."""
    a, b, q = _binary_parts(p, weights)
    parts = squarefree_decomposition(q)
    total = a + b + sum((len(f) - 1) * m for f, m in parts)
    simple = a <= 1 and b <= 1 and all(m == 1 for _, m in parts)
    return total, simple


def squarefree_binary(p: QPoly, weights: tuple[int, int] = (1, 1)) -> bool:
    """True iff the binary form has no repeated factor over Q-bar, z and u included."""
    return binary_factor_count(p, weights)[1]


def is_c_square_binary(p: QPoly, weights: tuple[int, int] = (1, 1)) -> bool:
    """True iff the binary form is a constant times a square over C."""
    if p.is_zero():
        return True
    a, b, q = _binary_parts(p, weights)
    if a % 2 or b % 2:
        return False
    return all(m % 2 == 0 for _, m in squarefree_decomposition(q))


def roots_of_multiplicity(p: QPoly, m: int, weights: tuple[int, int] = (1, 1)) -> list[Fraction]:
    """Monic polynomial in Z = z**s whose roots are the multiplicity >= m roots of p(Z, 1).

    Roots here are the factors z**s - lambda * u**t with lambda possibly 0;
    the factor u is not a root of the dehomogenization and is ignored.
    """
    return roots_with_multiplicity_at_least(dehomogenize(p, weights), m)


# multivariate exact division (lex order)

def _lex_lead(p: QPoly) -> Exponents:
    return max(p.terms)


def exact_divide(p: QPoly, d: QPoly) -> QPoly | None:
    """Quotient ``p / d`` if ``d`` divides ``p`` exactly, else None."""
    if d.is_zero():
        raise InputError("division by the zero polynomial")
    d = d if d.variables == p.variables else d.with_variables(p.variables)
    lead_e = _lex_lead(d)
    lead_c = d.coeff(lead_e)
    rem = p
    quot: dict[Exponents, Fraction] = {}
    while not rem.is_zero():
        e = _lex_lead(rem)
        if any(a < b for a, b in zip(e, lead_e)):
            return None
        qe = tuple(a - b for a, b in zip(e, lead_e))
        qc = rem.coeff(e) / lead_c
        quot[qe] = qc
        rem = rem - QPoly(p.variables, {qe: qc}) * d
    return QPoly(p.variables, quot)


# text grammar

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def parse_poly(text: str, variables: Sequence[str]) -> QPoly:
    """Parse ``c*x1^e1*x2^e2 + ...`` over the declared variables."""
    vs = tuple(variables)
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def fail(msg: str, tok=None):
        tok = tok or peek()
        if tok is None:
            line, col = _line_col(text, len(text))
        else:
            line, col = tok[2], tok[3]
        raise ParseError(msg, line, col)

    acc = QPoly.zero(vs)
    if not tokens:
        fail("empty polynomial")
    expect_term = True
    sign = 1
    while pos < len(tokens):
        tok = peek()
        if tok[0] == "op" and tok[1] in "+-":
            sign = sign * (-1 if tok[1] == "-" else 1) if expect_term else (-1 if tok[1] == "-" else 1)
            pos += 1
            expect_term = True
            continue
        if not expect_term:
            fail(f"expected '+' or '-' before {tok[1]!r}")
        coef = Fraction(sign)
        exps = [0] * len(vs)
        first = True
        while True:
            tok = peek()
            if tok is None or (tok[0] == "op" and tok[1] in "+-"):
                if first:
                    fail("missing term")
                break
            if not first:
                if tok[0] == "op" and tok[1] == "*":
                    pos += 1
                    tok = peek()
                    if tok is None:
                        fail("dangling '*'")
                else:
                    fail(f"expected '*' before {tok[1]!r}")
            if tok[0] == "num":
                coef *= Fraction(tok[1])
                pos += 1
            elif tok[0] == "name":
                if tok[1] not in vs:
                    fail(f"undeclared variable {tok[1]!r}", tok)
                pos += 1
                k = 1
                nxt = peek()
                if nxt is not None and nxt[0] == "op" and nxt[1] == "^":
                    pos += 1
                    num = peek()
                    if num is None or num[0] != "num" or "/" in num[1]:
                        fail("expected a non-negative integer exponent")
                    k = int(num[1])
                    pos += 1
                exps[vs.index(tok[1])] += k
            else:
                fail(f"unexpected {tok[1]!r}", tok)
            first = False
        acc = acc + QPoly(vs, {tuple(exps): coef})
        expect_term = False
        sign = 1
    if expect_term:
        fail("trailing operator")
    return acc


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            line, col = _line_col(text, i)
            raise ParseError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        line, col = _line_col(text, start)
        tokens.append((kind, m.group(kind), line, col))
        i = m.end()
    return tokens
