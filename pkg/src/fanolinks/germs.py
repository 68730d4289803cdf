"""Local analysis of cE and cD/2 germs.

A cE germ is ``x^2 + y^3 + y^2 f + y g + h`` with f, g, h in two variables
(z, u). The weight ``w_k`` on (z, u) is (k, 1); ``w_1`` is the ordinary degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .birational import REDUCIBLE, WblDiscrepancy, wbl_discrepancy
from .errors import InputError, ParseError, TruncationError
from .qpoly import (
    QPoly,
    _ugcd,
    bf_gcd,
    exact_divide,
    binary_divides,
    filter_eq,
    filter_le,
    is_c_square_binary,
    is_power_of_linear,
    parse_poly,
    roots_of_multiplicity,
    weight,
    weight_or_inf,
)

ZU = ("z", "u")
XYZU = ("x", "y", "z", "u")
MIN_TRUNCATION = 24

CE6, CE7, CE8, NOT_CE = "cE6", "cE7", "cE8", "not-cE"


def _truncate(p: QPoly, n: int) -> QPoly:
    return p.map_terms(lambda e, c: sum(e) <= n)


@dataclass(frozen=True)
class CEGerm:
    """The germ x^2 + y^3 + y^2 f + y g + h, exact in total degree <= truncation.

    ``names`` are display names for (x, y, z, u); ``quotient`` holds the
    weights of a cyclic group acting on (x, y, z, u) when the germ is a quotient.
    """

    f: QPoly
    g: QPoly
    h: QPoly
    truncation: int = MIN_TRUNCATION
    names: tuple[str, str, str, str] = XYZU
    quotient: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.truncation < MIN_TRUNCATION:
            raise TruncationError(f"truncation order {self.truncation} is below {MIN_TRUNCATION}")
        for name in ("f", "g", "h"):
            p = getattr(self, name)
            if len(p.variables) != 2:
                raise InputError(f"{name} must be a polynomial in two variables")
            p = QPoly(ZU, p.terms)
            object.__setattr__(self, name, _truncate(p, self.truncation))
        if self.f.constant_term():
            raise InputError("f must vanish at the origin")
        object.__setattr__(self, "names", tuple(self.names))

    @property
    def degenerate(self) -> bool:
        """x^2 + y^3 + y^2 f is singular along a curve."""
        return self.g.is_zero() and self.h.is_zero()

    def phi(self) -> QPoly:
        """The defining polynomial over (x, y, z, u)."""
        x, y = QPoly.var(XYZU, "x"), QPoly.var(XYZU, "y")
        f, g, h = (p.with_variables(XYZU) for p in (self.f, self.g, self.h))
        return x * x + y ** 3 + y * y * f + y * g + h


def parse_germ(text: str) -> CEGerm:
    """Read ``vars z, u`` followed by ``f = ...``, ``g = ...``, ``h = ...`` lines.

    Optional lines: ``truncation = N``. Blank lines and ``#`` comments are skipped.
    """
    variables = None
    polys: dict[str, QPoly] = {}
    truncation = MIN_TRUNCATION
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head = line.strip()
        if head.startswith("vars"):
            names = [v.strip() for v in head[4:].split(",") if v.strip()]
            if len(names) != 2:
                raise ParseError("expected two variables after 'vars'", lineno, 1)
            variables = tuple(names)
            continue
        if "=" not in line:
            raise ParseError("expected 'name = polynomial'", lineno, 1)
        key, body = line.split("=", 1)
        key = key.strip()
        offset = len(line) - len(body)
        if key == "truncation":
            try:
                truncation = int(body)
            except ValueError:
                raise ParseError("truncation must be an integer", lineno, offset + 1) from None
            continue
        if key not in ("f", "g", "h"):
            raise ParseError(f"unknown entry {key!r}", lineno, 1)
        if variables is None:
            raise ParseError("'vars' must come before the polynomials", lineno, 1)
        try:
            polys[key] = parse_poly(body, variables)
        except ParseError as err:
            raise ParseError(str(err).rsplit(" (line", 1)[0], lineno, offset + err.column) from None
    if variables is None:
        raise ParseError("missing 'vars' line", 1, 1)
    f, g, h = (polys.get(k, QPoly.zero(variables)) for k in ("f", "g", "h"))
    return CEGerm(f, g, h, truncation, ("x", "y") + variables)


# classification

def _w(p: QPoly, k: int):
    return weight_or_inf(p, (k, 1))


def _piece(p: QPoly, k: int, j: int) -> QPoly:
    return filter_eq(p, (k, 1), j)


def absorb_f(germ: CEGerm) -> CEGerm:
    """Complete the cube with y -> y - f/3, leaving f = 0."""
    f, g, h = germ.f, germ.g, germ.h
    if f.is_zero():
        return germ
    n = germ.truncation
    g2 = _truncate(g - f * f / 3, n)
    h2 = _truncate(h + f ** 3 * Fraction(2, 27) - f * g / 3, n)
    return CEGerm(QPoly.zero(ZU), g2, h2, n, germ.names, germ.quotient)


def ce_classify(germ: CEGerm) -> str:
    """Type of the f = 0 normal form by the degree 3, 4, 5 parts of g and h."""
    if not germ.f.is_zero():
        raise InputError("ce_classify expects f = 0; apply absorb_f first")
    g, h = germ.g, germ.h
    if not filter_le(g, (1, 1), 2).is_zero() or not filter_le(h, (1, 1), 3).is_zero():
        return NOT_CE
    if not _piece(h, 1, 4).is_zero():
        return CE6
    if not _piece(g, 1, 3).is_zero():
        return CE7
    if not _piece(h, 1, 5).is_zero():
        return CE8
    return NOT_CE


def classify(germ: CEGerm) -> str:
    return ce_classify(absorb_f(germ))


# necessary conditions for discrepancy > 1

@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool
    detail: str = ""


@dataclass(frozen=True)
class HighDiscReport:
    ce_type: str
    conditions: tuple[Condition, ...]

    def possible(self, shape: str) -> bool:
        """False when a necessary condition of that shape fails."""
        return all(c.holds for c in self.conditions if c.name.startswith(shape))


# (shape, bound kind, count) from the number of discrepancy-1 divisors
_DISC1_BOUNDS = {
    CE6: [("e2", "at-most", 3)],
    CE7: [("e5", "exactly", 1), ("e9", "exactly", 2)],
    CE8: [("e9", "at-most", 2)],
}


def _has_fourth_power_factor(p: QPoly) -> QPoly | None:
    """A linear form whose fourth power divides the binary form p."""
    if p.is_zero():
        return QPoly.var(ZU, "z")
    if min(e[1] for e in p.terms) >= 4:
        return QPoly.var(ZU, "u")
    roots = roots_of_multiplicity(p, 4)
    if len(roots) > 1:
        lam = -roots[0] if len(roots) == 2 else None
        if lam is not None:
            return QPoly(ZU, {(1, 0): 1, (0, 1): -lam})
        return QPoly(ZU, {(1, 0): 1})  # irrational root: report the shape only
    return None


def high_disc_necessary(germ: CEGerm, ce_type: str | None = None, disc1_count: int | None = None) -> HighDiscReport:
    """Evaluate the necessary conditions for a contraction of discrepancy > 1."""
    germ = absorb_f(germ)
    actual = ce_classify(germ)
    if ce_type is not None and ce_type != actual:
        raise InputError(f"germ is of type {actual}, not {ce_type}")
    g3, h4, h5 = _piece(germ.g, 1, 3), _piece(germ.h, 1, 4), _piece(germ.h, 1, 5)
    conds = []
    if actual == CE6:
        lin = is_power_of_linear(h4, 4)
        conds.append(Condition("e2: h4 is not a fourth power", lin is None, str(lin) if lin else ""))
    elif actual == CE7:
        coprime = not h5.is_zero() and weight(bf_gcd(g3, h5), (1, 1)) == 0
        conds.append(Condition("e5: gcd(g3, h5) = 1", coprime))
        lin = is_power_of_linear(g3, 3)
        ok = lin is not None and binary_divides(lin ** 4, h5)
        conds.append(Condition("e9: g3 = l^3 and l^4 | h5", ok, str(lin) if lin else ""))
    elif actual == CE8:
        lin = _has_fourth_power_factor(h5)
        conds.append(Condition("e9: g3 = 0 and l^4 | h5", g3.is_zero() and lin is not None))
    if disc1_count is not None:
        for shape, kind, n in _DISC1_BOUNDS.get(actual, []):
            ok = disc1_count <= n if kind == "at-most" else disc1_count == n
            conds.append(Condition(f"{shape}: {kind} {n} discrepancy-1 divisors", ok, str(disc1_count)))
    return HighDiscReport(actual, tuple(conds))


# discrepancy-1 divisors

LABEL_WEIGHTS = {
    "v1-1": (3, 2, 2, 1),
    "v1-2": (3, 3, 1, 1),
    "v1-3": (5, 4, 2, 1),
    "v1-4": (6, 4, 3, 1),
    "v1-5": (8, 5, 3, 1),
    "v1-6": (9, 6, 4, 1),
    "v1-7": (10, 7, 4, 1),
    "v2+": (4, 2, 1, 1),
    "v2-": (4, 2, 1, 1),
    "v3+": (5, 3, 2, 1),
    "v3-": (5, 3, 2, 1),
    "v4": (5, 4, 2, 1),
}
PLAIN_LABELS = ("v1-1", "v1-2", "v1-3", "v1-4", "v1-5", "v1-6", "v1-7")
REALIZED = "realized"


@dataclass(frozen=True)
class Disc1Candidate:
    """A weighted blow-up, possibly after a coordinate change, of discrepancy 1.

    ``non_terminal`` is None when no extra condition applies or the
    hypotheses fail. ``phi`` is the germ equation the weights apply to; None
    when the coordinate change needs an irrational constant.
    """

    label: str
    weights: tuple[int, int, int, int]
    hypotheses: bool
    non_terminal: bool | None = None
    phi: QPoly | None = field(default=None, compare=False)
    note: str = ""

    def discrepancy(self) -> WblDiscrepancy | None:
        return None if self.phi is None else wbl_discrepancy(self.phi, self.weights)


def _divisible_by_z(p: QPoly, k: int) -> bool:
    return p.is_zero() or min(e[0] for e in p.terms) >= k


def _divisible_by_u(p: QPoly, k: int) -> bool:
    return p.is_zero() or min(e[1] for e in p.terms) >= k


def _common_root(conds: Sequence[tuple[QPoly, int]], k: int) -> bool:
    """Some l = z - lambda u^k has l^m | P for every (P, m)."""
    acc = None
    for p, m in conds:
        if p.is_zero():
            continue
        r = roots_of_multiplicity(p, m, (k, 1))
        acc = r if acc is None else _ugcd(acc, r)
        if len(acc) <= 1:
            return False
    return True


def _square_in_y(A: QPoly, B: QPoly, C: QPoly, w: tuple[int, int]) -> bool:
    """Whether A y^2 + B y + C is a constant times a square."""
    if A.is_zero():
        return B.is_zero() and is_c_square_binary(C, w)
    return B * B == A * C * 4 and is_c_square_binary(A, w)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    return Fraction(a, b) if a * a == q.numerator and b * b == q.denominator else None


def _only_pure_z(p: QPoly, k: int) -> Fraction | None:
    """Coefficient c when p = c z^k exactly (c may be 0); None otherwise."""
    if p.is_zero():
        return Fraction(0)
    if set(p.terms) == {(k, 0)}:
        return p.coeff((k, 0))
    return None


def _v1(germ: CEGerm) -> list[Disc1Candidate]:
    f, g, h = germ.f, germ.g, germ.h
    phi = germ.phi()
    out = []

    def add(label, hyp, nonterm):
        out.append(Disc1Candidate(label, LABEL_WEIGHTS[label], hyp, nonterm if hyp else None, phi))

    w2 = lambda p: _w(p, 2)  # noqa: E731
    hyp = w2(f) >= 2 and w2(g) >= 4 and w2(h) >= 6
    add("v1-1", hyp, w2(g) >= 5 and w2(h) >= 8)

    hyp = _w(g, 1) == 3 and _w(h, 1) >= 6
    nonterm = False
    if hyp and _w(f, 1) >= 2:
        conds = [(_piece(g, 1, 3), 2), (_piece(g, 1, 4), 1), (_piece(h, 1, 6), 2), (_piece(h, 1, 7), 1)]
        nonterm = _common_root(conds, 1) or all(_divisible_by_u(p, m) for p, m in conds)
    add("v1-2", hyp, nonterm)

    hyp = (w2(f) >= 2 and w2(g) >= 6 and w2(h) >= 10
           and not _square_in_y(_piece(f, 2, 2), _piece(g, 2, 6), _piece(h, 2, 10), (2, 1)))
    nonterm = w2(f) >= 3 and _common_root(
        [(_piece(f, 2, 3), 1), (_piece(g, 2, 6), 2), (_piece(g, 2, 7), 1),
         (_piece(h, 2, 10), 2), (_piece(h, 2, 11), 1)], 2)
    add("v1-3", hyp, nonterm)

    w3 = lambda p: _w(p, 3)  # noqa: E731
    hyp = w3(f) >= 4 and w3(g) >= 8 and w3(h) >= 12
    add("v1-4", hyp, w3(g) >= 9 and w3(h) >= 14)

    hyp = w3(f) >= 5 and w3(g) >= 10 and w3(h) >= 15
    nonterm = _common_root(
        [(_piece(f, 3, 5), 1), (_piece(g, 3, 10), 2), (_piece(g, 3, 11), 1),
         (_piece(h, 3, 15), 3), (_piece(h, 3, 16), 2), (_piece(h, 3, 17), 1)], 3)
    add("v1-5", hyp, nonterm)

    w4 = lambda p: _w(p, 4)  # noqa: E731
    hyp = w4(f) >= 6 and w4(g) >= 12 and w4(h) >= 18
    add("v1-6", hyp, w4(g) >= 13 and w4(h) >= 20)

    hyp = (w4(f) >= 6 and w4(g) >= 13 and w4(h) >= 20
           and not _square_in_y(_piece(f, 4, 6), _piece(g, 4, 13), _piece(h, 4, 20), (4, 1)))
    nonterm = _common_root(
        [(_piece(f, 4, 6), 2), (_piece(g, 4, 13), 3), (_piece(h, 4, 20), 4), (_piece(f, 4, 7), 1),
         (_piece(g, 4, 14), 2), (_piece(h, 4, 21), 3), (_piece(g, 4, 15), 1), (_piece(h, 4, 22), 2),
         (_piece(h, 4, 23), 1)], 4)
    add("v1-7", hyp, nonterm)
    return out


def _compose(phi: QPoly, images: dict[str, QPoly], n: int) -> QPoly:
    return _truncate(phi.compose(images, XYZU), n)


def _v2(germ: CEGerm) -> list[Disc1Candidate]:
    weights = LABEL_WEIGHTS["v2+"]
    germ, note = _clear_h5(germ)
    f, g, h, n = germ.f, germ.g, germ.h, germ.truncation
    g3 = _only_pure_z(_piece(g, 1, 3), 3)
    h4 = _only_pure_z(_piece(h, 1, 4), 4)
    hyp = (filter_le(g, (1, 1), 2).is_zero() and filter_le(h, (1, 1), 3).is_zero()
           and g3 is not None and h4 is not None and h4 != 0
           and _piece(h, 1, 5).is_zero() and _w(f, 1) >= 2)
    if not hyp:
        return [Disc1Candidate(s, weights, False, note="hypotheses fail") for s in ("v2+", "v2-")]
    mu, nu2 = g3 / 2, -h4
    nonterm = (_divisible_by_z(_piece(f, 1, 2), 1) and _divisible_by_z(_piece(g, 1, 4), 2)
               and _divisible_by_z(_piece(g, 1, 5), 1) and _divisible_by_z(_piece(h, 1, 6), 3)
               and _divisible_by_z(_piece(h, 1, 7), 2) and _divisible_by_z(_piece(h, 1, 8), 1))
    nu = _rational_sqrt(nu2)
    out = []
    for sign, label in ((1, "v2+"), (-1, "v2-")):
        if nu is None:
            out.append(Disc1Candidate(label, weights, True, nonterm, None, "nu is irrational"))
            continue
        V = {v: QPoly.var(XYZU, v) for v in XYZU}
        alpha = -mu / nu
        step1 = _compose(germ.phi(), {"x": V["x"] + (V["y"] * V["z"] * alpha + V["z"] ** 2 * nu) * sign}, n)
        fy = step1.map_terms(lambda e, c: e[0] == 0 and e[1] == 2)
        fhat = QPoly(XYZU, {(0, 0) + e[2:]: c for e, c in fy.terms.items()}) / 3
        phi = _compose(step1, {"y": V["y"] - fhat}, n)
        out.append(Disc1Candidate(label, weights, True, nonterm, phi, note))
    return out


def _clear_h5(germ: CEGerm) -> tuple[CEGerm, str]:
    """Remove the degree-5 part of h by y -> y - h5 / g3 when g3 divides it."""
    h5, g3 = _piece(germ.h, 1, 5), _piece(germ.g, 1, 3)
    if h5.is_zero() or g3.is_zero():
        return germ, ""
    e = exact_divide(h5, g3)
    if e is None:
        return germ, ""
    return shifted_germ(germ, e), f"after y -> y - ({e})"


def _v3(germ: CEGerm) -> list[Disc1Candidate]:
    f, g, h, n = germ.f, germ.g, germ.h, germ.truncation
    weights = LABEL_WEIGHTS["v3+"]
    h8 = _only_pure_z(_piece(h, 2, 8), 4)
    hyp = (filter_le(h, (2, 1), 7).is_zero() and h8 is not None and h8 != 0
           and _w(f, 2) >= 3 and _w(g, 2) >= 6)
    if not hyp:
        return [Disc1Candidate(s, weights, False, note="hypotheses fail") for s in ("v3+", "v3-")]
    nonterm = (_divisible_by_z(_piece(f, 2, 3), 1) and _divisible_by_z(_piece(g, 2, 6), 2)
               and _divisible_by_z(_piece(g, 2, 7), 1) and _divisible_by_z(_piece(h, 2, 9), 3)
               and _divisible_by_z(_piece(h, 2, 10), 2) and _divisible_by_z(_piece(h, 2, 11), 1))
    nu = _rational_sqrt(-h8)
    out = []
    for sign, label in ((1, "v3+"), (-1, "v3-")):
        if nu is None:
            out.append(Disc1Candidate(label, weights, True, nonterm, None, "nu is irrational"))
            continue
        x, z = QPoly.var(XYZU, "x"), QPoly.var(XYZU, "z")
        phi = _compose(germ.phi(), {"x": x + z * z * (nu * sign)}, n)
        out.append(Disc1Candidate(label, weights, True, nonterm, phi))
    return out


def _v4(germ: CEGerm) -> list[Disc1Candidate]:
    f, g, h, n = germ.f, germ.g, germ.h, germ.truncation
    weights = LABEL_WEIGHTS["v4"]
    hyp = _w(f, 2) == 3 and _w(g, 2) >= 7 and _w(h, 2) == 10 and h.coeff((5, 0)) != 0
    if not hyp:
        return [Disc1Candidate("v4", weights, False, note="hypotheses fail")]
    nonterm = _common_root(
        [(_piece(f, 2, 3), 1), (_piece(g, 2, 7), 1), (_piece(h, 2, 10), 2), (_piece(h, 2, 11), 1)], 2)
    e = _piece(f, 2, 3).with_variables(XYZU)
    phi = _compose(germ.phi(), {"y": QPoly.var(XYZU, "y") - e}, n)
    return [Disc1Candidate("v4", weights, True, nonterm, phi)]


def shifted_germ(germ: CEGerm, e: QPoly) -> CEGerm:
    """The germ after y -> y - e, in normal form again."""
    f, g, h = germ.f, germ.g, germ.h
    e = QPoly(ZU, e.terms)
    n = germ.truncation
    return CEGerm(_truncate(f - e * 3, n), _truncate(g - e * f * 2 + e * e * 3, n),
                  _truncate(h - e ** 3 + e * e * f - e * g, n), n, germ.names, germ.quotient)


def disc1_candidates(germ: CEGerm, realized: Sequence[int] | None = None) -> list[Disc1Candidate]:
    """Evaluate every labelled weighted blow-up on the germ.

    ``realized`` is the weight of a known divisorial contraction; it is listed
    separately unless a plain label with passing hypotheses already has it.
    """
    out = _v1(germ) + _v2(germ) + _v3(germ) + _v4(germ)
    if realized is not None:
        realized = tuple(int(a) for a in realized)
        if not any(c.hypotheses and c.label in PLAIN_LABELS and c.weights == realized for c in out):
            phi = germ.phi()
            wd = wbl_discrepancy(phi, realized)
            ok = wd.e == 1 and wd.irreducibility != REDUCIBLE
            out.append(Disc1Candidate(REALIZED, realized, ok, None, phi, wd.irreducibility))
    return out


def disc1_count(germ: CEGerm, realized: Sequence[int] | None = None) -> int:
    return sum(c.hypotheses for c in disc1_candidates(germ, realized))


# cD/2 germs u^2 + y^2 z + lambda y x^(2a+1) + g(x^2, z)

@dataclass(frozen=True)
class CD2Std:
    """Standard cD/2 data; a is None when lambda = 0 and g is a polynomial in (x, z)."""

    lam: Fraction
    a: int | None
    g: QPoly

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.lam == 0:
            object.__setattr__(self, "a", None)
        elif self.a is None or self.a < 1:
            raise InputError("a must be a positive integer when lambda != 0")
        if len(self.g.variables) != 2:
            raise InputError("g must be a polynomial in (x, z)")
        if any(e[0] % 2 for e in self.g.terms):
            raise InputError("g must involve only even powers of x")
        if not all(e[0] >= 4 or (e[0] >= 2 and e[1] >= 2) or e[1] >= 3 for e in self.g.terms):
            raise InputError("g must lie in the ideal (x^4, x^2 z^2, z^3)")


@dataclass(frozen=True)
class CD2Invariants:
    b: Fraction
    b_prime: Fraction
    A: tuple[int, ...]
    l: int | None
    E3: Fraction | None


def cd2_invariants(std: CD2Std) -> CD2Invariants:
    if std.g.is_zero():
        raise InputError("g must be nonzero")
    b = weight(std.g, (Fraction(1, 2), 2))
    bp = weight(std.g, (Fraction(1, 2), 1))
    top = b - 2 if std.a is None else min(2 * std.a - 3, b - 2)
    A = tuple(k for k in range(1, int(top) + 1, 2))
    l = max(A) if A else None
    return CD2Invariants(b, bp, A, l, Fraction(2, l) if l else None)


def cd2_uniqueness_check(std: CD2Std) -> bool:
    inv = cd2_invariants(std)
    b, bp = inv.b, inv.b_prime
    if bp.denominator != 1:
        return False
    two_a = float("inf") if std.a is None else 2 * std.a
    if bp % 2:
        ineq = two_a - 1 > bp and b > bp + 1
    else:
        ineq = two_a - 2 > bp and b > bp + 2
    return ineq and std.g.coeff((0, int(bp))) != 0


CD, CE, UNDECIDED = "cD", "cE", "undecided"


def cube_of_linear(cubic: QPoly) -> QPoly | None:
    """A linear form l with cubic = c * l^3, or None."""
    vs = cubic.variables
    n = len(vs)
    unit = lambda i, k: tuple(k if j == i else 0 for j in range(n))  # noqa: E731
    for i in range(n):
        a = cubic.coeff(unit(i, 3))
        if not a:
            continue
        lin = {unit(i, 1): Fraction(1)}
        for j in range(n):
            if j != i:
                e = tuple(2 if t == i else (1 if t == j else 0) for t in range(n))
                c = cubic.coeff(e)
                if c:
                    lin[unit(j, 1)] = c / (3 * a)
        L = QPoly(vs, lin)
        return L if L ** 3 * a == cubic else None
    return None


def cd_or_ce(cubic: QPoly) -> str:
    """cE when the cubic part is a constant times a cube of a linear form."""
    if cubic.is_zero():
        return UNDECIDED
    if any(sum(e) != 3 for e in cubic.terms):
        raise InputError("expected a homogeneous cubic")
    return CE if cube_of_linear(cubic) is not None else CD
