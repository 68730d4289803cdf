from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from conftest import Q
from hypothesis import assume, given, strategies as st

from fanolinks.ambient import (
    NON_ISOLATED,
    NON_TERMINAL,
    WPS,
    QuotientType,
    ToricRank2,
    gcd_all,
    normalize_quotient_type,
    singular_strata,
    two_ray_game,
    wbl_matrix,
    wellformed_wps,
)
from fanolinks.errors import InputError

M100 = ToricRank2(((0, 5, 9, 2, 3, 1), (-5, 0, 2, 1, 4, 3)), 2, tuple("utwyzx"))
M110 = ToricRank2(((0, 8, 3, 7, 5, 1), (-8, 0, 1, 5, 7, 3)), 2, tuple("uwytzx"))

weight_lists = st.lists(st.integers(1, 12), min_size=2, max_size=5)


@pytest.mark.parametrize("w, ok", [((1, 2, 3, 5, 9), True), ((2, 2, 3, 5, 9), True), ((1, 2, 4, 6, 8), False), ((1,) * 5, True)])
def test_wellformed(w, ok):
    assert wellformed_wps(w) is ok


@pytest.mark.parametrize("w, expected", [
    ((1, 2, 3, 5, 9), [((1,), 2), ((3,), 5), ((2, 4), 3), ((4,), 9)]),
    ((1, 1, 1, 2, 3), [((3,), 2), ((4,), 3)]),
    ((1,) * 5, []),
])
def test_singular_strata_examples(w, expected):
    got = [(s.indices, s.r) for s in singular_strata(w)]
    assert sorted(got, key=lambda t: (len(t[0]), t)) == sorted(expected, key=lambda t: (len(t[0]), t))
    sizes = [len(s.indices) for s in singular_strata(w)]
    assert sizes == sorted(sizes)


def test_singular_strata_needs_wellformed():
    with pytest.raises(InputError):
        singular_strata((1, 2, 4, 6, 8))


@given(weight_lists)
def test_strata_match_brute_force(w):
    assume(wellformed_wps(w))
    got = {(s.indices, s.r) for s in singular_strata(w)}
    brute = set()
    n = len(w)
    for k in range(1, n + 1):
        for sub in combinations(range(n), k):
            r = gcd_all(w[i] for i in sub)
            full = tuple(i for i in range(n) if r > 1 and w[i] % r == 0)
            if r > 1 and full == sub:
                brute.add((sub, r))
    assert got == brute
    assert all(w[i] % r == 0 for sub, r in got for i in sub)


@pytest.mark.parametrize("r, w, expected", [
    (5, (3, 2, 3), QuotientType(5, 1)),
    (8, (1, 3, 7), QuotientType(8, 3)),
    (2, (1, 1, 1), QuotientType(2, 1)),
    (4, (1, 2, 3), NON_TERMINAL),
    (6, (1, 6, 5), NON_ISOLATED),
])
def test_normalize_examples(r, w, expected):
    assert normalize_quotient_type(r, w) == expected


@given(st.integers(2, 30), st.data())
def test_normalize_unit_invariance(r, data):
    a = data.draw(st.integers(1, r - 1))
    assume(gcd(a, r) == 1)
    base = normalize_quotient_type(r, (1, a, r - a))
    assert isinstance(base, QuotientType)
    assert normalize_quotient_type(r, base.weights) == base
    k = data.draw(st.integers(1, r - 1))
    assume(gcd(k, r) == 1)
    assert normalize_quotient_type(r, [k * x for x in (1, a, r - a)]) == base


# rank-2 toric varieties

def test_game_family_100():
    g = two_ray_game(M100)
    assert [M100.labels[i] for w in g.walls for i in w.columns] == ["w", "y", "z"]
    assert g.event == "divisorial" and M100.labels[g.eliminated] == "x"
    assert dict(zip(g.target_labels, g.target_weights)) == dict(u=1, t=3, w=5, y=1, z=1)


def test_game_family_110():
    g = two_ray_game(M110)
    assert M110.labels[g.eliminated] == "x"
    assert dict(zip(g.target_labels, g.target_weights)) == dict(u=1, w=3, y=1, t=2, z=1)


def test_game_fibration():
    g = two_ray_game(ToricRank2(((0, 2, 1, 2, 2), (-2, 0, 1, 3, 3)), 2, tuple("uxyzw")))
    assert g.event == "fibration" and g.target_weights == (1, 1)
    assert g.target_labels == ("z", "w")


@pytest.mark.parametrize("matrix, split", [
    (((0, 1, 1, 1), (-1, 0, 1, 1)), 2),
    (((1, 2, 3), (1, 2, 3)), 1),
    (((1, -1, 0, 1), (0, 0, 1, 1)), 2),
])
def test_game_rejects_degenerate(matrix, split):
    with pytest.raises(InputError):
        two_ray_game(ToricRank2(matrix, split))


def test_zero_column_rejected():
    with pytest.raises(InputError):
        ToricRank2(((0, 1, 0), (-1, 0, 0)), 2)


unimodular = st.lists(st.sampled_from([((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, 1), (1, 0)),
                                       ((1, -1), (0, 1)), ((-1, 0), (0, -1))]), max_size=6)


def _apply(m, T):
    rows = T.matrix
    new = tuple(tuple(m[i][0] * rows[0][j] + m[i][1] * rows[1][j] for j in range(len(rows[0])))
                for i in range(2))
    return ToricRank2(new, T.split, T.labels)


@given(unimodular)
def test_game_invariant_under_row_operations(ops):
    for T in (M100, M110):
        base = two_ray_game(T)
        for m in ops:
            T = _apply(m, T)
        g = two_ray_game(T)
        assert (g.event, g.eliminated, g.target_weights) == (base.event, base.eliminated, base.target_weights)


@pytest.mark.parametrize("p, center, bw, expected", [
    (WPS((5, 9, 2, 3, 1), tuple("twyzx")), 0, [Q(2, 5), Q(1, 5), Q(4, 5), Q(3, 5)], M100.matrix),
    (WPS((8, 3, 7, 5, 1), tuple("wytzx")), 0, [Q(1, 8), Q(5, 8), Q(7, 8), Q(3, 8)], M110.matrix),
    (WPS((1, 1, 1, 1)), 0, [1, 1, 1], ((0, 1, 1, 1, 1), (-1, 0, 1, 1, 1))),
])
def test_wbl_matrix_examples(p, center, bw, expected):
    assert wbl_matrix(p, center, bw).matrix == expected


@given(st.lists(st.integers(1, 9), min_size=4, max_size=4), st.data())
def test_u_column_recovers_source_weights(w, data):
    """The functional vanishing on the u column gives back the source weights."""
    assume(wellformed_wps(w))
    a0 = w[0]
    bw = [Fraction(data.draw(st.integers(1, 3 * a0)), a0) for _ in w[1:]]
    T = wbl_matrix(WPS(tuple(w)), 0, bw)
    (ux, uy), cols = T.columns[0], T.columns[1:]
    lam = (-uy, ux)
    vals = [lam[0] * c[0] + lam[1] * c[1] for c in cols]
    g = gcd_all(vals)
    assert [v // g for v in vals] == [x // gcd_all(w) for x in w]


def test_wbl_matrix_rejects_bad_weight():
    with pytest.raises(InputError):
        wbl_matrix(WPS((3, 1, 1)), 0, [Q(1, 2), 1])
