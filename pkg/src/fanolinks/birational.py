"""Intersection calculus on extractions and the numeric exclusion predicates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Sequence

from .errors import InputError
from .qpoly import (
    QPoly,
    binary_factor_count,
    exact_divide,
    filter_eq,
    is_c_square_binary,
    piece_in_power_ideal,
    weight,
)


@dataclass(frozen=True)
class BlowupModel:
    Atop: Fraction
    Etop: Fraction
    disc: Fraction
    dim: int = 3

    def __post_init__(self):
        if self.Etop <= 0 or self.disc <= 0:
            raise InputError("an extraction needs positive Etop and discrepancy")


@dataclass(frozen=True)
class DivClass:
    """The class c * (pullback of A) - e * E."""

    c: Fraction
    e: Fraction


def kawamata_model(r: int, a: int, A3=Fraction(0)) -> BlowupModel:
    """Kawamata blow-up of a 1/r(1, a, r - a) point."""
    if not 1 <= a < r or gcd(a, r) != 1:
        raise InputError(f"1/{r}(1,{a},{r - a}) is not a terminal quotient type")
    return BlowupModel(Fraction(A3), Fraction(r * r, a * (r - a)), Fraction(1, r), 3)


def weighted_blowup_model(r: int, weights: Sequence[int], A3, dim: int = 3, disc=None) -> BlowupModel:
    """Blow-up of a 1/r quotient point with weights (w_i / r) in dimension ``dim``.

    The exceptional divisor is a weighted projective space of dimension
    dim - 1, so its top self-intersection is r**(dim - 1) / prod(w_i) up to sign;
    the sign convention of ``product_class`` absorbs the sign.
    """
    if len(weights) != dim:
        raise InputError(f"expected {dim} weights")
    Etop = Fraction(r ** (dim - 1), prod(weights))
    if disc is None:
        disc = Fraction(sum(weights), r) - 1
    return BlowupModel(Fraction(A3), Etop, Fraction(disc), dim)


def _residue(m: int, r: int) -> int:
    m %= r
    return m if m else r


@dataclass(frozen=True)
class QuotientDivisor:
    k: int
    weights: tuple[Fraction, Fraction, Fraction]
    discrepancy: Fraction


def quotdiv_list(r: int, a: int) -> list[QuotientDivisor]:
    """The divisors of discrepancy below 1 over 1/r(1, a, r - a)."""
    if not 1 <= a < r or gcd(a, r) != 1:
        raise InputError(f"1/{r}(1,{a},{r - a}) is not a terminal quotient type")
    out = []
    for k in range(1, r):
        w = (Fraction(k, r), Fraction(_residue(k * a, r), r), Fraction(_residue(k * (r - a), r), r))
        out.append(QuotientDivisor(k, w, Fraction(k, r)))
    return out


# weighted blow-ups of hypersurface germs

IRREDUCIBLE, REDUCIBLE, UNDECIDED = "irreducible", "reducible", "undecided"


@dataclass(frozen=True)
class WblDiscrepancy:
    d: Fraction
    e: Fraction
    piece: QPoly
    irreducibility: str

    @property
    def positive(self) -> bool:
        return self.e > 0


def wbl_discrepancy(phi: QPoly, bw: Sequence[int]) -> WblDiscrepancy:
    """Weight d, discrepancy e = sum(bw) - d - 1 and lowest piece of the germ."""
    if phi.is_zero():
        raise InputError("the germ equation is zero")
    d = weight(phi, bw)
    piece = filter_eq(phi, bw, d)
    return WblDiscrepancy(d, Fraction(sum(bw)) - d - 1, piece, piece_irreducibility(piece, bw))


def _support(p: QPoly) -> list[int]:
    return [i for i in range(len(p.variables)) if any(e[i] for e in p.terms)]


def _restrict_vars(p: QPoly, idx: Sequence[int], w: Sequence[int]) -> tuple[QPoly, tuple[int, ...]]:
    names = [p.variables[i] for i in idx]
    return p.with_variables(names), tuple(int(w[i]) for i in idx)


def _monomial_gcd(p: QPoly) -> tuple[int, ...]:
    n = len(p.variables)
    return tuple(min(e[i] for e in p.terms) for i in range(n))


def piece_irreducibility(piece: QPoly, w: Sequence[int]) -> str:
    """Decide irreducibility over C for binary, monomial-times-binary and x^2 + ... shapes."""
    if piece.is_zero():
        return REDUCIBLE
    m = _monomial_gcd(piece)
    rest = exact_divide(piece, QPoly.monomial(piece.variables, m))
    if any(m):
        if len(rest) == 1 and sum(m) == 1:
            return IRREDUCIBLE
        return REDUCIBLE
    if len(rest) == 1:
        return REDUCIBLE
    supp = _support(rest)
    if len(supp) <= 2:
        binary, bw2 = _restrict_vars(rest, supp, w)
        total, _ = binary_factor_count(binary, bw2)
        return IRREDUCIBLE if total == 1 else REDUCIBLE
    # A x + B with a monomial A is irreducible iff no variable of A divides B
    for i in supp:
        if rest.degree_in(rest.variables[i]) != 1:
            continue
        A = _coefficient_of_power(rest, i, 1)
        if len(A) != 1:
            continue
        B = _coefficient_of_power(rest, i, 0)
        (ae,) = A.terms
        shared = [j for j, k in enumerate(ae) if k and all(e[j] for e in B.terms)]
        return REDUCIBLE if shared else IRREDUCIBLE
    # x^2 + B x + C with constant leading coefficient
    for i in supp:
        if rest.degree_in(rest.variables[i]) != 2:
            continue
        e2 = tuple(2 if j == i else 0 for j in range(len(rest.variables)))
        lead = rest.coeff(e2)
        if not lead:
            continue
        B = _coefficient_of_power(rest, i, 1)
        C = _coefficient_of_power(rest, i, 0)
        disc = B * B - C * (4 * lead)
        verdict = c_square(disc, w)
        if verdict is None:
            return UNDECIDED
        return REDUCIBLE if verdict else IRREDUCIBLE
    return UNDECIDED


def _coefficient_of_power(p: QPoly, i: int, k: int) -> QPoly:
    out = {}
    for e, c in p.terms.items():
        if e[i] == k:
            ne = list(e)
            ne[i] = 0
            out[tuple(ne)] = c
    return QPoly(p.variables, out)


def c_square(p: QPoly, w: Sequence[int]) -> bool | None:
    """Whether p is a constant times a square over C; None when the shape is not handled."""
    if p.is_zero():
        return True
    m = _monomial_gcd(p)
    even = all(k % 2 == 0 for k in m)
    rest = exact_divide(p, QPoly.monomial(p.variables, m))
    supp = _support(rest)
    if not supp:
        return even
    if any(rest.degree_in(rest.variables[i]) % 2 for i in supp):
        return False
    if len(supp) > 2:
        return None
    binary, bw2 = _restrict_vars(rest, supp, w)
    return even and is_c_square_binary(binary, bw2)


# non-terminality tests from ideal membership

NO_FINDING, CASE_1, CASE_2, CASE_3 = "no-finding", "case-1", "case-2", "case-3"


def in_power_of_ideal(piece: QPoly, x1: str, p: QPoly, k: int) -> bool:
    """Membership of ``piece`` in (x1, p)**k for p free of x1."""
    i = piece.index(x1)
    if p.degree_in(x1) > 0:
        raise InputError("the second generator must not involve the first")
    for j in range(k):
        cj = _coefficient_of_power(piece, i, j)
        if cj.is_zero():
            continue
        if exact_divide(cj, p ** (k - j)) is None:
            return False
    return True


def singwbl_check(phi: QPoly, bw: Sequence[int], p: QPoly | None = None) -> str:
    """First matching ideal-membership pattern that forces a non-terminal blow-up.

    Variables are taken in the order of ``phi``: (x1, x2, x3, x4).
    """
    if phi.is_zero():
        raise InputError("the germ equation is zero")
    x1, x2, x3, _ = phi.variables
    d = weight(phi, bw)
    pieces = [filter_eq(phi, bw, d + k) for k in range(4)]
    trio = (x1, x2, x3)
    if (piece_in_power_ideal(pieces[0], trio, 3) and piece_in_power_ideal(pieces[1], trio, 2)
            and piece_in_power_ideal(pieces[2], trio, 1)):
        return CASE_1
    if p is not None and in_power_of_ideal(pieces[0], x1, p, 2) and in_power_of_ideal(pieces[1], x1, p, 1):
        return CASE_2
    i1 = phi.index(x1)
    pair = (x2, x3)
    idx = [phi.index(v) for v in pair]
    first_ok = all(e[i1] >= 2 or sum(e[j] for j in idx) >= 4 for e in pieces[0].terms)
    if (first_ok and piece_in_power_ideal(pieces[1], pair, 3) and piece_in_power_ideal(pieces[2], pair, 2)
            and piece_in_power_ideal(pieces[3], pair, 1)):
        return CASE_3
    return NO_FINDING


# products of divisor classes

def product_class(classes: Sequence[DivClass], model: BlowupModel) -> Fraction:
    """Intersection number of ``dim`` classes, mixed terms vanishing."""
    if len(classes) != model.dim:
        raise InputError(f"expected {model.dim} classes, got {len(classes)}")
    pc = prod((Fraction(c.c) for c in classes), start=Fraction(1))
    pe = prod((Fraction(c.e) for c in classes), start=Fraction(1))
    return pc * model.Atop - pe * model.Etop


def curve_excl_test(deg: Fraction, iota: int, minusK3: Fraction) -> bool:
    """Degree test: (-K . curve) = iota * deg at least (-K)^3."""
    if deg <= 0:
        raise InputError("curve degree must be positive")
    return iota * Fraction(deg) >= Fraction(minusK3)


def smooth_pt_test(l: Fraction, minusK3: Fraction) -> bool:
    """Isolating-class test l <= 4 / (-K)^3."""
    if l <= 0:
        raise InputError("isolating degree must be positive")
    return Fraction(l) <= 4 / Fraction(minusK3)


def negdef_2x2(m: Sequence[Sequence[Fraction]]) -> bool:
    a, b = Fraction(m[0][0]), Fraction(m[0][1])
    c, d = Fraction(m[1][0]), Fraction(m[1][1])
    if b != c:
        raise InputError("matrix must be symmetric")
    return a < 0 and a * d - b * c > 0


def selfint_correction(indices: Sequence[int]) -> Fraction:
    """Self-intersection of a smooth rational curve through Du Val A_{r-1} points."""
    if any(r < 2 for r in indices):
        raise InputError("each index must be at least 2")
    return Fraction(-2) + sum((Fraction(r - 1, r) for r in indices), Fraction(0))
