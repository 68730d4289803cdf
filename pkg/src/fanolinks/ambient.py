"""Weighted projective spaces and rank-2 toric varieties with the 2-ray game."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from functools import cmp_to_key
from math import gcd
from typing import Sequence

from .errors import InputError


@dataclass(frozen=True)
class WPS:
    weights: tuple[int, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(a) for a in self.weights))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(len(self.weights))))
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != len(self.weights):
            raise InputError("weights and coordinate names differ in length")
        if any(a < 1 for a in self.weights):
            raise InputError(f"weights must be positive: {self.weights}")

    def __len__(self) -> int:
        return len(self.weights)

    def weight_of(self, name: str) -> int:
        return self.weights[self.names.index(name)]


def _as_wps(w: WPS | Sequence[int]) -> WPS:
    return w if isinstance(w, WPS) else WPS(tuple(w))


def gcd_all(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def wellformed_wps(w: WPS | Sequence[int]) -> bool:
    """Every choice of all but one weight has gcd 1."""
    ws = _as_wps(w).weights
    if len(ws) < 2:
        return True
    return all(gcd_all(sub) == 1 for sub in combinations(ws, len(ws) - 1))


@dataclass(frozen=True)
class Stratum:
    indices: tuple[int, ...]
    names: tuple[str, ...]
    r: int


def singular_strata(w: WPS | Sequence[int]) -> list[Stratum]:
    """Closed coordinate subsets whose weights share a factor r > 1, smallest first."""
    p = _as_wps(w)
    if not wellformed_wps(p):
        raise InputError(f"weights {p.weights} are not well-formed")
    ws = p.weights
    out = []
    for k in range(1, len(ws) + 1):
        for sub in combinations(range(len(ws)), k):
            r = gcd_all(ws[i] for i in sub)
            if r > 1 and tuple(i for i in range(len(ws)) if ws[i] % r == 0) == sub:
                out.append(Stratum(sub, tuple(p.names[i] for i in sub), r))
    return out


@dataclass(frozen=True, order=True)
class QuotientType:
    """The terminal cyclic quotient 1/r(1, a, r - a) with 1 <= a <= r/2."""

    r: int
    a: int

    @property
    def weights(self) -> tuple[int, int, int]:
        return (1, self.a, self.r - self.a)

    def __str__(self) -> str:
        return f"1/{self.r}(1,{self.a},{self.r - self.a})"


NON_ISOLATED = "non-isolated"
NON_TERMINAL = "non-terminal"


def normalize_quotient_type(r: int, w: Sequence[int]) -> QuotientType | str:
    """Canonical form of 1/r(w) or a marker string when it is not terminal."""
    if r < 2:
        raise InputError(f"index must be at least 2, got {r}")
    w = [int(x) % r for x in w]
    if len(w) != 3:
        raise InputError("quotient weights must be a triple")
    if any(x == 0 for x in w):
        return NON_ISOLATED
    for i, j in combinations(range(3), 2):
        k = 3 - i - j
        if (w[i] + w[j]) % r == 0 and gcd(w[k], r) == 1 and gcd(w[i], r) == 1:
            a = w[i] * pow(w[k], -1, r) % r
            return QuotientType(r, min(a, r - a))
    return NON_TERMINAL


@dataclass(frozen=True)
class ToricRank2:
    matrix: tuple[tuple[int, ...], tuple[int, ...]]
    split: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(rows) != 2 or len(rows[0]) != len(rows[1]):
            raise InputError("grading matrix must have two rows of equal length")
        object.__setattr__(self, "matrix", rows)
        n = len(rows[0])
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"c{i}" for i in range(n)))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != n:
            raise InputError("one label per column is required")
        if not 1 <= self.split < n:
            raise InputError(f"split {self.split} out of range for {n} columns")
        if any(c == (0, 0) for c in self.columns):
            raise InputError("zero column in grading matrix")

    @property
    def columns(self) -> list[tuple[int, int]]:
        return list(zip(*self.matrix))

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "split": self.split, "labels": list(self.labels)}


@dataclass(frozen=True)
class Wall:
    ray: tuple[int, int]
    columns: tuple[int, ...]


@dataclass(frozen=True)
class GameTrace:
    walls: tuple[Wall, ...]
    event: str  # "divisorial" or "fibration"
    eliminated: int | None
    target_weights: tuple[int, ...]
    target_labels: tuple[str, ...]
    final_columns: tuple[int, ...] = field(default=())

    @property
    def target(self) -> WPS:
        return WPS(self.target_weights, self.target_labels)


def _cross(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _primitive(v) -> tuple[int, int]:
    g = gcd(v[0], v[1])
    return (v[0] // g, v[1] // g)


def two_ray_game(T: ToricRank2) -> GameTrace:
    """Sweep the rays from the first block's inner boundary ray to the far end."""
    cols = T.columns
    n = len(cols)
    if all(_cross(cols[0], c) == 0 for c in cols):
        raise InputError("all columns are collinear")
    for block in (range(T.split), range(T.split, n)):
        if all(_cross(cols[block[0]], cols[j]) == 0 for j in block) and len(block) > 1:
            raise InputError("a block of the split spans only a ray")
    # a strictly convex configuration lets cross products order the columns
    if any(_cross(a, b) == 0 and (a[0] * b[0] + a[1] * b[1]) < 0 for a, b in combinations(cols, 2)):
        raise InputError("columns are not contained in a strictly convex cone")

    def cmp(i, j):
        c = _cross(cols[i], cols[j])
        return -1 if c > 0 else (1 if c < 0 else 0)

    order = sorted(range(n), key=cmp_to_key(cmp))
    if _cross(cols[order[0]], cols[order[-1]]) <= 0:
        raise InputError("columns are not contained in a strictly convex cone")
    first = set(range(T.split))
    m = T.split
    if set(order[:m]) == first:
        sweep = order[m - 1:]
    elif set(order[n - m:]) == first:
        sweep = list(reversed(order[: n - m + 1]))
    else:
        raise InputError("the first block does not form an end segment of the ray order")
    # group the sweep into rays, dropping the starting boundary ray
    rays: list[tuple[tuple[int, int], list[int]]] = []
    for j in sweep:
        ray = _primitive(cols[j])
        if rays and rays[-1][0] == ray:
            rays[-1][1].append(j)
        else:
            rays.append((ray, [j]))
    start_ray = rays[0]
    rays = rays[1:]
    if not rays:
        raise InputError("the second block lies on the boundary ray of the first")
    start_extra = [j for j in start_ray[1] if j not in first]
    if start_extra:
        raise InputError("second-block columns lie on the starting boundary ray")
    walls = tuple(Wall(ray, tuple(sorted(js))) for ray, js in rays[:-1])
    last_ray, last_cols = rays[-1]
    if len(last_cols) == 1:
        j = last_cols[0]
        lam = (last_ray[1], -last_ray[0])
        vals = [lam[0] * c[0] + lam[1] * c[1] for c in cols]
        others = [i for i in range(n) if i != j]
        if all(vals[i] <= 0 for i in others):
            vals = [-v for v in vals]
        if any(vals[i] <= 0 for i in others):
            raise InputError("contraction target has a non-positive weight")
        g = gcd_all(vals[i] for i in others)
        return GameTrace(walls, "divisorial", j, tuple(vals[i] // g for i in others),
                         tuple(T.labels[i] for i in others), (j,))
    mults = []
    for j in last_cols:
        c = cols[j]
        mults.append(abs(c[0]) // abs(last_ray[0]) if last_ray[0] else abs(c[1]) // abs(last_ray[1]))
    g = gcd_all(mults)
    last_sorted = tuple(last_cols)
    return GameTrace(walls, "fibration", None, tuple(x // g for x in mults),
                     tuple(T.labels[i] for i in last_sorted), last_sorted)


def wbl_matrix(p: WPS | Sequence[int], center: int, bw: Sequence) -> ToricRank2:
    """Grading matrix of the weighted blow-up of a coordinate point.

    Columns are (u, center, other coordinates); ``bw`` are the blow-up
    weights of the other coordinates as rationals with denominator dividing
    the center weight.
    """
    p = _as_wps(p)
    a0 = p.weights[center]
    others = [i for i in range(len(p)) if i != center]
    if len(bw) != len(others):
        raise InputError(f"expected {len(others)} blow-up weights, got {len(bw)}")
    second = []
    for b in bw:
        v = Fraction(b) * a0
        if v.denominator != 1 or v <= 0:
            raise InputError(f"blow-up weight {b} is not a positive multiple of 1/{a0}")
        second.append(int(v))
    top = [0, a0] + [p.weights[i] for i in others]
    bottom = [-a0, 0] + second
    labels = ("u", p.names[center]) + tuple(p.names[i] for i in others)
    return ToricRank2((tuple(top), tuple(bottom)), 2, labels)
