import random
from fractions import Fraction
from math import prod

import pytest
from conftest import Q, stratum_oracle
from hypothesis import assume, given, strategies as st

from fanolinks.ambient import QuotientType
from fanolinks.errors import InputError, NonTerminalError
from fanolinks.families import (
    REID_BOUND,
    Basket,
    QuotSing,
    _search_degree,
    basket,
    condition_check,
    coordinate_point_type,
    enumerate_families,
    explicit_basket,
    family_record,
    general_qsmooth,
    invariants,
    reid_sum,
    try_family,
)
from fanolinks.links import random_form

NAMES = ("a", "b", "c", "d", "e")


def types(b):
    return {(e.r, e.a): e.multiplicity for e in b.entries}


@pytest.mark.parametrize("d, w, failing", [
    (18, (1, 2, 3, 5, 9), set()),
    (5, (1, 1, 1, 2, 5), {"top_weight_below_degree"}),
    (10, (1, 1, 1, 1, 1), {"degree_below_weight_sum"}),
    (12, (2, 4, 6, 3, 1), {"ascending"}),
])
def test_condition_check(d, w, failing):
    assert {k for k, ok in condition_check(d, w).items() if not ok} == failing


@pytest.mark.parametrize("d, w, ok", [
    (21, (1, 3, 5, 7, 8), True), (7, (1, 1, 1, 2, 3), True), (6, (1, 1, 2, 3, 6), False), (10, (1, 1, 1, 3, 4), False)])
def test_general_qsmooth(d, w, ok):
    assert general_qsmooth(d, w) is ok


@pytest.mark.parametrize("d, w, expected", [
    (18, (1, 2, 3, 5, 9), {(3, 1): 2, (5, 2): 1}),
    (21, (1, 3, 5, 7, 8), {(5, 1): 1, (8, 3): 1}),
    (38, (2, 3, 5, 11, 19), {(3, 1): 1, (5, 2): 1, (11, 4): 1}),
    (7, (1, 1, 1, 2, 3), {(2, 1): 1, (3, 1): 1}),
    (4, (1, 1, 1, 1, 1), {}),
])
def test_basket_examples(d, w, expected):
    assert types(basket(d, w)) == expected


@pytest.mark.parametrize("d, w, A3, iota", [
    (18, (1, 2, 3, 5, 9), Q(1, 15), 2),
    (38, (2, 3, 5, 11, 19), Q(1, 165), 2),
    (7, (1, 1, 1, 2, 3), Q(7, 6), 1),
    (21, (1, 3, 5, 7, 8), Q(1, 40), 3),
])
def test_invariants(d, w, A3, iota):
    i, a3, k3 = invariants(d, w)
    assert (i, a3, k3) == (iota, A3, iota ** 3 * A3)


def test_reid_sum():
    b = Basket((QuotSing(5, 1), QuotSing(8, 3)))
    assert reid_sum(b) == Q(24, 5) + Q(63, 8) == Q(507, 40)
    assert reid_sum(Basket()) == 0
    assert reid_sum(Basket((QuotSing(25, 1),))) > REID_BOUND


def test_tangent_choices_agree():
    assert coordinate_point_type(18, (1, 2, 3, 5, 9), 3) == QuotientType(5, 2)
    assert coordinate_point_type(18, (1, 2, 3, 5, 9), 4) is None


def test_point_off_member_when_weight_divides_degree():
    assert coordinate_point_type(21, (1, 3, 5, 7, 8), 3) is None


@pytest.mark.parametrize("d, w, err", [
    (12, (1, 2, 4, 6, 8), InputError),
    (10, (1, 1, 1, 3, 4), InputError),
])
def test_family_record_rejects(d, w, err):
    with pytest.raises(err):
        family_record(d, w)
    assert try_family(d, w) is None


def test_non_terminal_point():
    with pytest.raises(NonTerminalError):
        basket(6, (1, 1, 1, 2, 4))


# enumeration

def test_enumerate_counts(records_168):
    assert len(records_168) == 130
    assert sum(r.index == 1 for r in records_168) == 95
    assert sum(r.index >= 2 for r in records_168) == 35


def test_enumerate_small_bounds():
    assert sorted((r.d, r.index) for r in enumerate_families(1)) == [(2, 3), (3, 2), (4, 1)]
    nine = {(r.d, r.weights) for r in enumerate_families(9)}
    assert {(18, (1, 2, 3, 5, 9)), (21, (1, 3, 5, 7, 8))} <= nine


def test_records_obey_invariants(records_168):
    for r in records_168:
        assert reid_sum(r.basket) <= REID_BOUND
        assert all(e.r <= REID_BOUND for e in r.basket.entries)
        assert r.minusK3 == r.index ** 3 * Fraction(r.d, prod(r.weights))
        assert r.minusK3 > 0 and r.weights[-1] < r.d and r.d not in r.weights


@pytest.mark.parametrize("d", [337, 400, 503, 660, 840, 1001])
def test_no_weight_above_168_at_larger_bound(d):
    assert all(r.weights[-1] <= 168 for r in _search_degree((d, 500)) if r.index >= 2)


@given(st.data())
def test_basket_matches_stratum_scan(records_168, data):
    """Formula basket agrees with an explicit scan of a random member."""
    r = data.draw(st.sampled_from(records_168))
    seed = data.draw(st.integers(0, 10 ** 6))
    report = explicit_basket(random_form(random.Random(seed), NAMES, r.weights, r.d), r.weights)
    assume(not report.multiple_roots)
    assert report.basket == r.basket
    assert not report.non_quasismooth


def _general_member(r):
    for seed in range(20):
        F = random_form(random.Random(seed), NAMES, r.weights, r.d)
        if not explicit_basket(F, r.weights).multiple_roots:
            return F
    raise AssertionError(f"no general member found for {r.d}, {r.weights}")


def test_stratum_oracle_multiplicities(records_168):
    for r in records_168[::7]:
        F = _general_member(r)
        want = stratum_oracle(F, r.weights)
        got = {}
        for e in r.basket.entries:
            got[e.r] = got.get(e.r, 0) + e.multiplicity
        assert dict(want) == got, (r.d, r.weights)
