from fractions import Fraction

import pytest
from conftest import ZU, P, Q, nonzero
from hypothesis import given, strategies as st

from fanolinks.birational import REDUCIBLE
from fanolinks.errors import InputError, ParseError, TruncationError
from fanolinks.germs import (
    CD,
    CE,
    CE6,
    CE7,
    CE8,
    NOT_CE,
    UNDECIDED,
    CD2Std,
    CEGerm,
    absorb_f,
    cd2_invariants,
    cd2_uniqueness_check,
    cd_or_ce,
    ce_classify,
    classify,
    disc1_candidates,
    disc1_count,
    high_disc_necessary,
    parse_germ,
)
from fanolinks.links import hat_germ, sample_member
from fanolinks.qpoly import QPoly, is_power_of_linear, power_scalar

XZ = ("x", "z")


def germ(f="0", g="0", h="0"):
    return CEGerm(P(f, ZU), P(g, ZU), P(h, ZU))


@pytest.mark.parametrize("g, label", [
    (germ(h="z^4 + u^5"), CE6),
    (germ(g="z^3", h="u^5"), CE7),
    (germ(h="u^5"), CE8),
    (germ(g="z^2"), NOT_CE),
    (germ(h="u^6"), NOT_CE),
])
def test_ce_classify(g, label):
    assert ce_classify(g) == label


def test_ce_classify_needs_f_zero():
    with pytest.raises(InputError):
        ce_classify(germ(f="u^2", h="z^4"))


def test_absorb_f_example():
    out = absorb_f(germ(f="u^2"))
    assert out.f.is_zero() and out.g == P("-1/3*u^4", ZU) and out.h == P("2/27*u^6", ZU)
    assert absorb_f(germ(g="z^3")) == germ(g="z^3")


@given(nonzero, nonzero, st.sampled_from([germ(f="z", h="z^4 + u^5"), germ(f="u^2", g="z^3", h="u^5"),
                                          germ(f="z*u", g="u^4", h="z^5 + u^6"), germ(h="z^6")]))
def test_classify_invariant_under_rescaling(a, b, g):
    scale = lambda p: QPoly(ZU, {e: c * a ** e[0] * b ** e[1] for e, c in p.terms.items()})  # noqa: E731
    assert classify(CEGerm(scale(g.f), scale(g.g), scale(g.h))) == classify(g)


def test_truncation_floor():
    with pytest.raises(TruncationError):
        CEGerm(P("0", ZU), P("z^3", ZU), P("0", ZU), truncation=10)


def test_parse_germ_roundtrip():
    g = parse_germ("# a cE7 germ\nvars z, u\ng = z^3\nh = u^7\ntruncation = 30\n")
    assert (g.g, g.h, g.truncation, classify(g)) == (P("z^3", ZU), P("u^7", ZU), 30, CE7)


@pytest.mark.parametrize("text, line", [("g = z^3", 1), ("vars z, u\nq = 1", 2), ("vars z, u\nh = z^^2", 2)])
def test_parse_germ_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_germ(text)
    assert err.value.line == line


# necessary conditions for discrepancy > 1

def test_ce6_fourth_power():
    assert not high_disc_necessary(germ(h="z^4 + u^5")).possible("e2")
    assert high_disc_necessary(germ(h="z^4 + u^4")).possible("e2")


def test_ce7_conditions():
    ok = high_disc_necessary(germ(g="z^3", h="z^4*u"))
    assert ok.possible("e9") and not ok.possible("e5")
    coprime = high_disc_necessary(germ(g="z^3", h="u^5"))
    assert coprime.possible("e5") and not coprime.possible("e9")


def test_ce8_condition():
    assert high_disc_necessary(germ(h="z^4*u + u^6")).possible("e9")
    assert not high_disc_necessary(germ(h="z^5 + u^5")).possible("e9")


def test_count_bound_conditions():
    rep = high_disc_necessary(germ(h="z^4 + u^4"), CE6, disc1_count=6)
    assert not rep.possible("e2")
    with pytest.raises(InputError):
        high_disc_necessary(germ(h="z^4"), CE7)


@given(nonzero, nonzero, st.integers(3, 5))
def test_power_certificate_covariant(alpha, beta, k):
    """l**k stays a k-th power after z -> alpha z + beta u, with the certificate mapped along."""
    lin = P("z + 2*u", ZU)
    image = QPoly(ZU, {(1, 0): alpha, (0, 1): beta})
    sub = lambda p: p.compose({"z": image}, ZU)  # noqa: E731
    found = is_power_of_linear(sub(lin ** k), k)
    assert found is not None and power_scalar(sub(lin) ** k, found, k) is not None


# discrepancy-1 candidates

def test_candidate_labels_and_weights():
    cands = disc1_candidates(germ(h="z^4 + u^5"))
    labels = [c.label for c in cands]
    assert labels[:7] == [f"v1-{i}" for i in range(1, 8)]
    assert {"v2+", "v2-", "v3+", "v3-", "v4"} <= set(labels)
    table = {c.label: c.weights for c in cands}
    assert table["v1-1"] == (3, 2, 2, 1) and table["v3+"] == (5, 3, 2, 1) and table["v4"] == (5, 4, 2, 1)


def test_degenerate_germ():
    g = germ(f="z")
    assert g.degenerate
    assert isinstance(disc1_count(g), int)


@pytest.fixture(scope="module")
def hat_germs():
    out = {}
    for fam in (100, 103):
        out[fam] = [hat_germ(fam, sample_member(fam, s)) for s in range(4)]
    return out


REALIZED = {100: (6, 4, 3, 1), 103: (12, 8, 5, 1)}


@pytest.mark.parametrize("fam, label, count", [(100, CE6, 6), (103, CE8, 7)])
def test_hat_germ_counts(hat_germs, fam, label, count):
    for g in hat_germs[fam]:
        assert classify(g) == label
        assert disc1_count(g, REALIZED[fam]) == count


@pytest.mark.parametrize("fam", [100, 103])
def test_passing_candidates_have_discrepancy_one(hat_germs, fam):
    for g in hat_germs[fam]:
        for c in disc1_candidates(g, REALIZED[fam]):
            if c.hypotheses and c.phi is not None:
                wd = c.discrepancy()
                assert wd.e == 1 and wd.irreducibility != REDUCIBLE


def test_non_realized_candidates_flag_non_terminal(hat_germs):
    for g in hat_germs[100]:
        flags = {c.label: c.non_terminal for c in disc1_candidates(g, REALIZED[100]) if c.hypotheses}
        assert flags.pop("v1-4") is False
        assert all(flags.values()) and len(flags) == 5


# cD/2 germs

@pytest.mark.parametrize("lam, a, g, b, bp, l, E3", [
    (1, 3, "z^3", 6, 3, 3, Q(2, 3)),
    (1, 2, "z^3", 6, 3, 1, Q(2)),
    (0, None, "x^4", 2, 2, None, None),
])
def test_cd2_invariants(lam, a, g, b, bp, l, E3):
    inv = cd2_invariants(CD2Std(Q(lam), a, P(g, XZ)))
    assert (inv.b, inv.b_prime, inv.l, inv.E3) == (b, bp, l, E3)


@pytest.mark.parametrize("lam, a, g, ok", [
    (1, 3, "z^3", True),
    (1, 3, "x^2*z^2 + z^4", False),
    (1, 2, "z^4", False),
])
def test_cd2_uniqueness(lam, a, g, ok):
    assert cd2_uniqueness_check(CD2Std(Q(lam), a, P(g, XZ))) is ok


@pytest.mark.parametrize("a", range(3, 10))
def test_b_prime_relation(a):
    """With g = z^a the bounds meet at l = 2a - 3 and b' = (l + 3) / 2."""
    std = CD2Std(Q(1), a, P(f"z^{a}", XZ))
    inv = cd2_invariants(std)
    assert cd2_uniqueness_check(std)
    assert inv.l == 2 * a - 3 and inv.b_prime == Fraction(inv.l + 3, 2)


@pytest.mark.parametrize("g", ["x^2*z", "z^2", "x^3"])
def test_cd2_rejects_outside_ideal(g):
    with pytest.raises(InputError):
        CD2Std(Q(1), 3, P(g, XZ))


@pytest.mark.parametrize("cubic, names, kind", [
    ("y^3", ("y", "z", "u"), CE),
    ("y^2*u", ("y", "z", "u"), CD),
    ("v^2*z + z^3", ("v", "z"), CD),
    ("y^3 + 3*y^2*z + 3*y*z^2 + z^3", ("y", "z"), CE),
    ("0", ("y", "z"), UNDECIDED),
])
def test_cd_or_ce(cubic, names, kind):
    assert cd_or_ce(P(cubic, names)) == kind
