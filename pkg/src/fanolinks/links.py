"""Link data for five Fano hypersurface families: blow-ups, 2-ray games and targets."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Callable, Sequence

from .ambient import WPS, GameTrace, QuotientType, ToricRank2, gcd_all, two_ray_game, wbl_matrix
from .birational import REDUCIBLE, WblDiscrepancy, wbl_discrepancy
from .errors import InputError
from .families import Basket, FamilyRecord, ci_basket, explicit_basket, family_record, rational_text
from .germs import (
    CD,
    CE7,
    CD2Std,
    CEGerm,
    MIN_TRUNCATION,
    cd_or_ce,
    classify,
    disc1_count,
)
from .qpoly import PowerScaled, QPoly, filter_eq, homogeneous_degree, substitute, weight

FAMILIES = (100, 101, 102, 103, 110)
SOURCE_NAMES = ("x", "y", "z", "t", "w")
CE_QUOTIENT = "cE/2"
CD_QUOTIENT = "cD/2"


class NormalizationError(InputError):
    """The equation lacks a monomial required by the normal form."""


@dataclass(frozen=True)
class LinkSpec:
    """Table entry: the family, the blown-up point and its weights."""

    family: int
    degree: int
    weights: tuple[int, ...]
    center: str
    blowup: dict[str, Fraction]
    hat_center: str
    germ_roles: tuple[str, str, str, str]


def _bw(r: int, **nums: int) -> dict[str, Fraction]:
    return {k: Fraction(v, r) for k, v in nums.items()}


LINKS: dict[int, LinkSpec] = {
    100: LinkSpec(100, 18, (1, 2, 3, 5, 9), "t", _bw(5, x=3, y=1, z=4, w=2), "z", ("w", "t", "u", "y")),
    101: LinkSpec(101, 22, (1, 2, 3, 7, 11), "t", _bw(7, x=4, y=1, z=5, w=2), "z", ("w", "t", "u", "y")),
    102: LinkSpec(102, 26, (1, 2, 5, 7, 13), "t", _bw(7, x=4, y=1, z=6, w=3), "z", ("w", "t", "u", "y")),
    103: LinkSpec(103, 38, (2, 3, 5, 11, 19), "t", _bw(11, x=1, y=7, z=8, w=4), "z", ("w", "t", "u", "x")),
    110: LinkSpec(110, 21, (1, 3, 5, 7, 8), "w", _bw(8, x=3, y=1, z=7, t=5), "z", ("u", "y", "t", "w")),
}

# the two extra weight systems on (u, y, t, w) at the cE7 point of the 110 target
CANDIDATES_110 = ((2, 1, 2, 3), (3, 1, 1, 3))


def spec_of(family: int) -> LinkSpec:
    try:
        return LINKS[int(family)]
    except (KeyError, ValueError):
        raise InputError(f"unknown family {family!r}; expected one of {FAMILIES}") from None


# sample members

def monomials(weights: Sequence[int], degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the given weighted degree."""
    if not weights:
        return [()] if degree == 0 else []
    w, rest = weights[-1], weights[:-1]
    out = []
    for k in range(degree // w + 1):
        out.extend(e + (k,) for e in monomials(rest, degree - k * w))
    return out


def _rand_coeff(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([n for n in range(-9, 10) if n]), rng.randint(1, 4))


def random_form(rng: random.Random, names: Sequence[str], weights: Sequence[int], degree: int) -> QPoly:
    return QPoly(names, {e: _rand_coeff(rng) for e in monomials(weights, degree)})


def _form(rng, names, weights, degree, fixed=None) -> QPoly:
    """Random form in ``names`` (embedded in the source variables) with pinned coefficients."""
    p = random_form(rng, names, weights, degree).with_variables(SOURCE_NAMES)
    for mono, c in (fixed or {}).items():
        e = tuple(mono.get(v, 0) for v in SOURCE_NAMES)
        terms = dict(p.terms)
        terms[e] = Fraction(c)
        p = QPoly(SOURCE_NAMES, terms)
    return p


def _v(name: str) -> QPoly:
    return QPoly.var(SOURCE_NAMES, name)


def _cubic_shape(rng, spec: LinkSpec, z_or_x: str, fixed: dict[int, dict]) -> QPoly:
    """w^2 + t^3 v + t^2 e + t e' + e'' with e's over the three smallest weights."""
    a = spec.weights
    free = SOURCE_NAMES[:3]
    t, w = _v("t"), _v("w")
    if spec.degree - 3 * a[3] != a[SOURCE_NAMES.index(z_or_x)]:
        raise InputError("shape does not match the family")
    F = w * w + t ** 3 * _v(z_or_x)
    for j in range(3):
        deg = spec.degree - j * a[3]
        F = F + t ** j * _form(rng, free, a[:3], deg, fixed.get(j))
    return F


def _shape_110(rng) -> QPoly:
    a = (1, 3)
    xy = ("x", "y")
    x, y, z, t, w = (_v(n) for n in SOURCE_NAMES)

    def e(k, fixed=None):
        return _form(rng, xy, a, k, fixed)

    return (w * w * z + w * (t * e(6) + e(13)) + z ** 4 * x + z ** 3 * e(6)
            + z * z * (t * e(4) + e(11)) + z * (t * e(9) + e(16)) + t ** 3 + t * e(14)
            + e(21, {_mono(y=7): 1}))


class _Mono(dict):
    def __hash__(self):
        return hash(tuple(sorted(self.items())))


def _mono(**exps: int) -> _Mono:
    return _Mono(exps)


def sample_member(family: int, seed: int = 0, variant: str | None = None) -> QPoly:
    """A random member in the normalized shape with fixed-seed rational coefficients.

    ``variant`` selects the cE7 or cE8 sub-case of family 101.
    """
    spec = spec_of(family)
    rng = random.Random(seed * 1009 + family)
    if family == 100:
        return _cubic_shape(rng, spec, "z", {0: {_mono(z=6): -1}})
    if family == 101:
        variant = variant or CE7
        if variant == CE7:
            mu = _rand_coeff(rng)
            fixed = {1: {_mono(z=5): mu}, 0: {_mono(z=7, x=1): 0}}
        elif variant == "cE8":
            nu = _rand_coeff(rng)
            fixed = {1: {_mono(z=5): 0}, 0: {_mono(z=7, x=1): nu}}
        else:
            raise InputError(f"family 101 has variants cE7 and cE8, not {variant!r}")
        return _cubic_shape(rng, spec, "x", fixed)
    if family == 102:
        return _cubic_shape(rng, spec, "z", {0: {_mono(z=5, x=1): 1}})
    if family == 103:
        return _cubic_shape(rng, spec, "z", {0: {_mono(z=7, y=1): 1}})
    return _shape_110(rng)


def generic_member(family: int, seed: int = 0) -> QPoly:
    """Random rational coefficients on the full monomial basis, no normalization."""
    spec = spec_of(family)
    return random_form(random.Random(seed), SOURCE_NAMES, spec.weights, spec.degree)


# the hat construction

@dataclass(frozen=True)
class HatData:
    matrix: ToricRank2
    game: GameTrace
    order: Fraction
    G: QPoly
    F_hat: QPoly
    realized: dict[str, Fraction]
    target_matrix: ToricRank2


def _cross(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def blowup_matrix(spec: LinkSpec) -> ToricRank2:
    p = WPS(spec.weights, SOURCE_NAMES)
    c = SOURCE_NAMES.index(spec.center)
    others = [n for n in SOURCE_NAMES if n != spec.center]
    return wbl_matrix(p, c, [spec.blowup[n] for n in others])


def hat_transform(spec: LinkSpec, F: QPoly) -> HatData:
    """Blow up the center, play the 2-ray game and transform the equation."""
    F = F.with_variables(SOURCE_NAMES)
    T = blowup_matrix(spec)
    game = two_ray_game(T)
    if game.event != "divisorial":
        raise InputError(f"family {spec.family}: the 2-ray game ends in a fibration")
    bw = [spec.blowup.get(n, Fraction(0)) for n in SOURCE_NAMES]
    order = weight(F, bw)
    rules = {n: PowerScaled(QPoly.var(SOURCE_NAMES + ("u",), n), spec.blowup[n]) for n in spec.blowup}
    G = substitute(F, rules, SOURCE_NAMES + ("u",), "u", -order)
    elim = T.labels[game.eliminated]
    F_hat = G.specialize({elim: 1}).with_variables(game.target_labels)
    cols = dict(zip(T.labels, T.columns))
    zc, xc = cols[spec.hat_center], cols[elim]
    scale = abs(_cross(xc, zc))
    realized = {n: Fraction(_cross(cols[n], zc), scale) for n in game.target_labels if n != spec.hat_center}
    if any(v <= 0 for v in realized.values()):
        raise InputError(f"family {spec.family}: non-positive weight at the target center")
    r_hat = game.target_weights[game.target_labels.index(spec.hat_center)]
    top = [-r_hat if n == elim else (0 if n == spec.hat_center else int(realized[n] * r_hat)) for n in T.labels]
    hw = dict(zip(game.target_labels, game.target_weights))
    bottom = [hw.get(n, 0) for n in T.labels]
    target = ToricRank2((tuple(top), tuple(bottom)), T.split, T.labels)
    return HatData(T, game, order, G, F_hat, realized, target)


def degree_law(spec: LinkSpec, order: Fraction) -> Fraction:
    """Target degree from the source degree, the center index and the vanishing order.

    With (x1, x2) the eliminated column, the target grading is
    (x2 * row1 - x1 * row2) / g, and the transformed equation has bidegree
    (d, r * order).
    """
    T = blowup_matrix(spec)
    game = two_ray_game(T)
    x1, x2 = T.columns[game.eliminated]
    vals = [x2 * c[0] - x1 * c[1] for i, c in enumerate(T.columns) if i != game.eliminated]
    sign = 1 if all(v > 0 for v in vals) else -1
    g = gcd_all(vals)
    r = spec.weights[SOURCE_NAMES.index(spec.center)]
    return sign * Fraction(x2 * spec.degree - x1 * r * order, g)


# the germ at the target center

@dataclass(frozen=True)
class HatGerm:
    """Local equation at the target center, in normal form when one exists."""

    phi: QPoly
    germ: CEGerm | None
    quotient: tuple[int, ...] | None
    label: str


def _power_coeffs(p: QPoly, name: str) -> dict[int, QPoly]:
    i = p.index(name)
    rest = tuple(v for v in p.variables if v != name)
    out: dict[int, dict] = {}
    for e, c in p.terms.items():
        out.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
    return {k: QPoly(rest, t) for k, t in out.items()}


def _normal_form(phi: QPoly, roles: Sequence[str]) -> CEGerm:
    xr, yr, zr, ur = roles
    by_x = _power_coeffs(phi, xr)
    if set(by_x) - {0, 1, 2}:
        raise NormalizationError(f"{xr} appears beyond degree 2")
    lead = by_x.get(2)
    if lead is None or len(lead) != 1 or lead.constant_term() == 0:
        raise NormalizationError(f"coefficient of {xr}^2 must be a nonzero constant")
    c = lead.constant_term()
    B = by_x.get(1, QPoly.zero(lead.variables))
    C = by_x.get(0, QPoly.zero(lead.variables))
    rest = (C - B * B / (4 * c)) / c
    by_y = _power_coeffs(rest, yr)
    if set(by_y) - {0, 1, 2, 3}:
        raise NormalizationError(f"{yr} appears beyond degree 3")
    cube = by_y.get(3)
    if cube is None or cube != QPoly.const(cube.variables, 1):
        raise NormalizationError(f"coefficient of {yr}^3 must be 1 after scaling")
    zu = (zr, ur)
    f, g, h = (by_y.get(k, QPoly.zero(cube.variables)).with_variables(zu) for k in (2, 1, 0))
    n = max(MIN_TRUNCATION, phi.total_degree())
    return CEGerm(f, g, h, n, tuple(roles))


def _e7_section(phi: QPoly) -> bool:
    """y = 0 section has lowest (6,4,9)-piece a w^2 + b u^3 + c t^3 u on (u, t, w)."""
    sec = phi.specialize({"y": 0}).with_variables(("u", "t", "w"))
    piece = filter_eq(sec, (6, 4, 9), weight(sec, (6, 4, 9)))
    shape = {(0, 0, 2), (3, 0, 0), (1, 3, 0)}
    return set(piece.terms) == shape


def hat_germ_of(spec: LinkSpec, F_hat: QPoly, target: WPS) -> HatGerm:
    phi = F_hat.specialize({spec.hat_center: 1})
    r_hat = target.weight_of(spec.hat_center)
    roles = spec.germ_roles
    if spec.family == 110:
        phi = phi.with_variables(roles)
        return HatGerm(phi, None, None, CE7 if _e7_section(phi) else "undecided")
    phi = phi.with_variables(roles)
    germ = _normal_form(phi, roles)
    if r_hat > 1:
        q = tuple(target.weight_of(v) % r_hat for v in roles)
        germ = CEGerm(germ.f, germ.g, germ.h, germ.truncation, germ.names, q)
        return HatGerm(phi, germ, q, CE_QUOTIENT)
    return HatGerm(phi, germ, None, classify(germ))


def hat_germ(family: int, F: QPoly) -> CEGerm:
    """The cE germ at the target center in x^2 + y^3 + y^2 f + y g + h form."""
    spec = spec_of(family)
    hd = hat_transform(spec, F)
    hg = hat_germ_of(spec, hd.F_hat, hd.game.target)
    if hg.germ is None:
        raise NormalizationError(f"family {family}: the target germ has no cubic normal form; use hat_germ_raw")
    return hg.germ


def hat_germ_raw(family: int, F: QPoly) -> QPoly:
    spec = spec_of(family)
    hd = hat_transform(spec, F)
    return hat_germ_of(spec, hd.F_hat, hd.game.target).phi


# the 110 unprojection

@dataclass(frozen=True)
class CIModel:
    weights: tuple[int, ...]
    degrees: tuple[int, int]
    equations: tuple[QPoly, QPoly]
    names: tuple[str, ...] = ("u", "y", "z", "t", "w", "v")

    @property
    def index(self) -> int:
        return sum(self.weights) - sum(self.degrees)

    @property
    def minusK3(self) -> Fraction:
        return self.index ** 3 * Fraction(prod(self.degrees), prod(self.weights))


BREVE_RULES = _bw(5, x=2, y=1, t=4, w=1)
BREVE_NAMES = ("u", "y", "z", "t", "w")


def unprojection_matrix() -> ToricRank2:
    """Grading of the blow-up of the 1/8 point after adjoining v = G1 / u."""
    labels = ("u", "z", "w", "v", "y", "t", "x")
    return ToricRank2(((0, 5, 8, 16, 3, 7, 1), (-5, 0, 1, 7, 1, 4, 2)), 2, labels)


def split_110(F: QPoly) -> tuple[QPoly, QPoly]:
    """F = z F1 + F2 with F2 free of z."""
    F = F.with_variables(SOURCE_NAMES)
    F2 = F.specialize({"z": 0}).with_variables(SOURCE_NAMES)
    F1 = F.map_terms(lambda e, c: e[2] > 0)
    F1 = QPoly(SOURCE_NAMES, {e[:2] + (e[2] - 1,) + e[3:]: c for e, c in F1.terms.items()})
    if F2.degree_in("z"):
        raise InputError("the z-free part still contains z")
    return F1, F2


def _grave(p: QPoly, order: Fraction) -> QPoly:
    rules = {n: PowerScaled(QPoly.var(SOURCE_NAMES + ("u",), n), b) for n, b in BREVE_RULES.items()}
    G = substitute(p, rules, SOURCE_NAMES + ("u",), "u", -order)
    return G.specialize({"x": 1}).with_variables(BREVE_NAMES)


def unprojection_110(F: QPoly) -> CIModel:
    """The codimension-2 model with v = F1-transform / u."""
    F1, F2 = split_110(F)
    B1, B2 = _grave(F1, Fraction(2, 5)), _grave(F2, Fraction(7, 5))
    names = BREVE_NAMES + ("v",)
    v, u, z = (QPoly.var(names, n) for n in ("v", "u", "z"))
    E1 = v * u - B1.with_variables(names)
    E2 = v * z + B2.with_variables(names)
    game = two_ray_game(unprojection_matrix())
    w = dict(zip(game.target_labels, game.target_weights))
    weights = tuple(w[n] for n in names)
    degs = (int(homogeneous_degree(E1, weights)), int(homogeneous_degree(E2, weights)))
    return CIModel(weights, degs, (E1, E2), names)


def rho_identity(F: QPoly) -> bool:
    """s F1'(u, y, s u, t, w) + F2'(u, y, s u, t, w) equals the hat equation with s for z."""
    F1, F2 = split_110(F)
    B1, B2 = _grave(F1, Fraction(2, 5)), _grave(F2, Fraction(7, 5))
    names = ("u", "y", "s", "t", "w")
    s, u = QPoly.var(names, "s"), QPoly.var(names, "u")
    img = {"z": s * u}
    bar = s * B1.compose(img, names) + B2.compose(img, names)
    hat = hat_transform(LINKS[110], F).F_hat.rename({"z": "s"}).with_variables(names)
    return bar == hat


RHO_WEIGHTS = (1, 1, 2, 2, 3)


def breve_cd_cubic(ci: CIModel, depth: int = 4) -> tuple[QPoly, QPoly]:
    """Quadratic and cubic parts at the t-point after eliminating u.

    The second equation is solved for u by fixed-point iteration truncated at
    degree 3; the cubic part is returned on w = 0.
    """
    E1, E2 = (E.specialize({"t": 1}) for E in ci.equations)
    loc = ("y", "z", "w", "v")
    lin = E2.coeff(tuple(1 if n == "u" else 0 for n in E2.variables))
    if not lin:
        raise InputError("the second equation has no linear u term at the t-point")

    def trunc(p: QPoly) -> QPoly:
        return p.map_terms(lambda e, c: sum(e) <= 3)

    sol = QPoly.zero(loc)
    for _ in range(depth):
        step = E2.compose({"u": sol}, loc)
        sol = trunc(sol - step / lin)
    local = trunc(E1.compose({"u": sol}, loc))
    quad = local.map_terms(lambda e, c: sum(e) == 2)
    cubic = local.map_terms(lambda e, c: sum(e) == 3).specialize({"w": 0})
    return quad, cubic


# the standard cD/2 data at the breve t-point: u^2 + y^2 z + y x^7 + z^3
BREVE_CD2_STD = CD2Std(Fraction(1), 3, QPoly(("x", "z"), {(0, 3): 1}))
# blow-up weights on (u, y, z, w, v) in units of 1/2
BREVE_E_WEIGHTS = (7, 1, 4, 5, 3)


def exceptional_ci_E3(r: int, ci: CIModel, bw: Sequence[int]) -> Fraction:
    """E^3 of the weighted blow-up of the t-point: r^2 * prod(local degrees) / prod(weights)."""
    names = ("u", "y", "z", "w", "v")
    degs = [weight(E.specialize({"t": 1}).with_variables(names), bw) for E in ci.equations]
    return Fraction(r * r) * prod(degs) / prod(bw)


# reports

@dataclass(frozen=True)
class LinkReport:
    family: int
    source: FamilyRecord
    center: str
    blowup_weights: dict[str, Fraction]
    source_matrix: ToricRank2
    target_matrix: ToricRank2
    game: GameTrace
    target: WPS
    target_degree: int
    target_index: int
    target_minusK3: Fraction
    target_basket: Basket
    non_quasismooth: tuple[str, ...]
    label: str
    vanishing_order: Fraction
    realized_weights: dict[str, Fraction]
    F_hat: QPoly
    germ_checks: dict = field(default_factory=dict)
    breve: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        q = rational_text
        return {
            "family": self.family,
            "source": self.source.to_json(),
            "center": self.center,
            "blowup_weights": {k: q(v) for k, v in self.blowup_weights.items()},
            "source_matrix": self.source_matrix.to_json(),
            "target_matrix": self.target_matrix.to_json(),
            "game": {
                "walls": [{"ray": list(w.ray), "columns": [self.game_labels[i] for i in w.columns]}
                          for w in self.game.walls],
                "event": self.game.event,
                "eliminated": self.source_matrix.labels[self.game.eliminated],
            },
            "target_weights": dict(zip(self.target.names, self.target.weights)),
            "target_degree": self.target_degree,
            "target_index": self.target_index,
            "target_minusK3": q(self.target_minusK3),
            "target_basket": self.target_basket.to_json(),
            "non_quasismooth": list(self.non_quasismooth),
            "label": self.label,
            "vanishing_order": q(self.vanishing_order),
            "realized_weights": {k: q(v) for k, v in self.realized_weights.items()},
            "target_equation": str(self.F_hat),
            "germ_checks": _jsonable(self.germ_checks),
            "breve": _jsonable(self.breve),
        }

    @property
    def game_labels(self) -> tuple[str, ...]:
        return self.source_matrix.labels


def _jsonable(x):
    if isinstance(x, Fraction):
        return rational_text(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (QuotientType, QPoly)):
        return str(x)
    if isinstance(x, Basket):
        return x.to_json()
    return x


def _germ_checks(spec: LinkSpec, hd: HatData, hg: HatGerm) -> dict:
    r_hat = hd.game.target.weight_of(spec.hat_center)
    realized = tuple(int(hd.realized[v] * r_hat) for v in spec.germ_roles)
    out: dict = {"realized_germ_weights": list(realized)}
    if spec.family == 110:
        for bw in CANDIDATES_110 + (realized,):
            wd: WblDiscrepancy = wbl_discrepancy(hg.phi, bw)
            out[",".join(map(str, bw))] = {"e": wd.e, "irreducibility": wd.irreducibility}
        out["extra_disc1"] = sum(
            1 for bw in CANDIDATES_110
            if (wd := wbl_discrepancy(hg.phi, bw)).e == 1 and wd.irreducibility != REDUCIBLE)
        return out
    if hg.germ is not None and hg.quotient is None:
        out["disc1_count"] = disc1_count(hg.germ, realized)
    return out


def _breve_data(F: QPoly) -> dict:
    ci = unprojection_110(F)
    pts = ci_basket(ci.equations, ci.weights)
    quad, cubic = breve_cd_cubic(ci)
    w = QPoly.var(quad.variables, "w")
    quad_ok = not quad.is_zero() and quad == (w * w) * quad.coeff((0, 0, 2, 0))
    kind = cd_or_ce(cubic)
    return {
        "weights": list(ci.weights),
        "degrees": list(ci.degrees),
        "index": ci.index,
        "minusK3": ci.minusK3,
        "basket": pts.basket,
        "non_quasismooth": list(pts.non_quasismooth),
        "t_point": CD_QUOTIENT if kind == CD and quad_ok else kind,
        "E3": exceptional_ci_E3(2, ci, BREVE_E_WEIGHTS),
        "rho_identity": rho_identity(F),
        "rho_weights": list(RHO_WEIGHTS),
    }


def build_hat_link(family: int, F: QPoly | None = None, seed: int = 0) -> LinkReport:
    """Assemble the link data for one family; F defaults to a sample member."""
    spec = spec_of(family)
    if F is None:
        F = sample_member(family, seed)
    source = family_record(spec.degree, spec.weights)
    hd = hat_transform(spec, F)
    target = hd.game.target
    d_hat = homogeneous_degree(hd.F_hat, target.weights)
    if d_hat.denominator != 1:
        raise InputError("target equation has fractional degree")
    d_hat = int(d_hat)
    iota = sum(target.weights) - d_hat
    pts = explicit_basket(hd.F_hat, target.weights)
    hg = hat_germ_of(spec, hd.F_hat, target)
    return LinkReport(
        family, source, spec.center, dict(spec.blowup), hd.matrix, hd.target_matrix, hd.game, target,
        d_hat, iota, iota ** 3 * Fraction(d_hat, prod(target.weights)), pts.basket, pts.non_quasismooth,
        hg.label, hd.order, hd.realized, hd.F_hat, _germ_checks(spec, hd, hg),
        _breve_data(F) if family == 110 else {},
    )


# verification against the expected table

def _qt(*pairs: tuple[int, int]) -> set[QuotientType]:
    return {QuotientType(r, a) for r, a in pairs}


EXPECTED: dict[int, dict] = {
    100: dict(source_index=2, source_A3=Fraction(1, 15), source_basket=_qt((3, 1), (5, 2)),
              target_weights=(1, 1, 1, 3, 5), target_degree=10, target_index=1,
              target_minusK3=Fraction(2, 3), target_basket=_qt((3, 1)), label={"cE6"}, disc1_count=6),
    101: dict(source_index=2, source_A3=Fraction(1, 21), source_basket=_qt((3, 1), (7, 2)),
              target_weights=(1, 1, 1, 4, 6), target_degree=12, target_index=1,
              target_minusK3=Fraction(1, 2), target_basket=_qt((2, 1)), label={"cE7", "cE8"},
              disc1_count_min=5),
    102: dict(source_index=2, source_A3=Fraction(1, 35), source_basket=_qt((5, 1), (7, 3)),
              target_weights=(1, 1, 2, 4, 7), target_degree=14, target_index=1,
              target_minusK3=Fraction(1, 4), target_basket=_qt((4, 1)), label={CE_QUOTIENT}),
    103: dict(source_index=2, source_A3=Fraction(1, 165), source_basket=_qt((3, 1), (5, 2), (11, 4)),
              target_weights=(1, 1, 3, 7, 11), target_degree=22, target_index=1,
              target_minusK3=Fraction(2, 21), target_basket=_qt((3, 1), (7, 3)), label={"cE8"},
              disc1_count=7),
    110: dict(source_index=3, source_A3=Fraction(1, 40), source_basket=_qt((5, 1), (8, 3)),
              target_weights=(1, 1, 1, 2, 3), target_degree=7, target_index=1,
              target_minusK3=Fraction(7, 6), target_basket=_qt((2, 1), (3, 1)), label={"cE7"},
              extra_disc1=2,
              breve=dict(weights=[1, 1, 2, 2, 3, 5], degrees=[6, 7], minusK3=Fraction(7, 10),
                         basket=_qt((5, 2)), t_point=CD_QUOTIENT, E3=Fraction(2, 3),
                         rho_identity=True, rho_weights=[1, 1, 2, 2, 3])),
}


@dataclass(frozen=True)
class LedgerEntry:
    field: str
    expected: object
    actual: object
    ok: bool


@dataclass(frozen=True)
class VerifyResult:
    family: int
    entries: tuple[LedgerEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list[LedgerEntry]:
        return [e for e in self.entries if not e.ok]

    def to_json(self) -> dict:
        return {"family": self.family, "passed": self.passed,
                "entries": [{"field": e.field, "expected": _jsonable(_plain(e.expected)),
                             "actual": _jsonable(_plain(e.actual)), "ok": e.ok} for e in self.entries]}


def _plain(x):
    if isinstance(x, set):
        return sorted(str(v) for v in x)
    return x


def verify_link(report: LinkReport, expected: dict | None = None) -> VerifyResult:
    """Compare every reported field with the expected table."""
    exp = EXPECTED[report.family] if expected is None else expected
    out: list[LedgerEntry] = []

    def check(name, want, got, ok: Callable[[object, object], bool] = lambda a, b: a == b):
        out.append(LedgerEntry(name, want, got, bool(ok(want, got))))

    src = report.source
    check("source_index", exp["source_index"], src.index)
    check("source_A3", exp["source_A3"], src.A3)
    check("source_basket", exp["source_basket"], src.basket.types())
    check("target_weights", exp["target_weights"], tuple(sorted(report.target.weights)))
    check("target_degree", exp["target_degree"], report.target_degree)
    check("target_index", exp["target_index"], report.target_index)
    check("target_minusK3", exp["target_minusK3"], report.target_minusK3)
    check("target_basket", exp["target_basket"], report.target_basket.types())
    spec = LINKS[report.family]
    check("non_quasismooth", (spec.hat_center,), report.non_quasismooth)
    check("label", exp["label"], report.label, lambda a, b: b in a)
    check("degree_law", report.target_degree, degree_law(spec, report.vanishing_order))
    gc = report.germ_checks
    if "disc1_count" in exp:
        check("disc1_count", exp["disc1_count"], gc.get("disc1_count"))
    if "disc1_count_min" in exp:
        check("disc1_count_min", exp["disc1_count_min"], gc.get("disc1_count"),
              lambda a, b: b is not None and b >= a)
    if "extra_disc1" in exp:
        check("extra_disc1", exp["extra_disc1"], gc.get("extra_disc1"))
    for k, want in exp.get("breve", {}).items():
        got = report.breve.get(k)
        if k == "basket":
            got = got.types() if got is not None else None
        check(f"breve.{k}", want, got)
    return VerifyResult(report.family, tuple(out))
