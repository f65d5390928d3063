import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from primesums.bounds import (
    HIT_RULES, RULES, BoundCheck, Status, check_dusart_interval, check_dusart_pn, check_hassani,
    check_hit_conjectures, check_mandl, check_mandl_s, check_pi_conjectures, check_prop312,
    check_prop315, check_robin, check_sun_lower, dusart_interval, evaluate, kpk_threshold,
    pi_conjecture_sweep, scan_hits, scan_pi_rule, scan_rule,
)
from primesums.errors import DomainError
from primesums.prime_sums import s, s_prime
from primesums.primes import nth_prime
from primesums.scanner import PiCheckpointRow, PrimeHit


def test_mandl_and_robin_examples():
    c = check_mandl(9)
    assert (c.lhs, c.rhs, c.status) == (200, 207, Status.HOLDS)
    assert type(c.lhs) is int and type(c.rhs) is int
    assert (check_mandl(10).lhs, check_mandl(10).rhs) == (258, 290)
    assert check_mandl(10**4).holds
    assert (check_robin(2).lhs, check_robin(2).rhs) == (4, 5)
    assert (check_robin(10).lhs, check_robin(10).rhs) == (110, 129)
    assert not check_robin(10).strict
    assert check_mandl_s(5).holds
    with pytest.raises(DomainError):
        check_mandl(8)
    with pytest.raises(DomainError):
        check_mandl_s(4)


def test_hassani_example():
    c = check_hassani(10)
    assert c.holds and c.lhs == pytest.approx(1.659) and c.rhs == 16
    assert check_hassani(100).holds
    with pytest.raises(DomainError):
        check_hassani(9)


def test_ratio_and_sun():
    c = check_prop312(3)
    assert c.lhs == pytest.approx(41 / (18 * math.log(3)))
    assert c.rhs == pytest.approx(1 + (math.log(2) + math.log(math.log(6))) / math.log(3))
    assert c.holds and check_prop312(1000).holds
    with pytest.raises(DomainError):
        check_prop312(2)
    sun = check_sun_lower(3)
    assert sun.rhs == 41 and sun.lhs == pytest.approx(2 + 18 * (math.log(3) + math.log(2 / math.sqrt(math.e))))
    assert check_sun_lower(1000).holds and check_sun_lower(10**5).holds


def test_dusart_point_forms():
    c = check_dusart_pn(6)
    assert c.holds and c.lhs == 13
    assert c.rhs == pytest.approx(6 * (math.log(6) + math.log(math.log(6))))
    partial = check_dusart_pn(2)
    assert "not applicable" in partial.note and "dusart_lower_refined" in partial.note
    top = check_dusart_pn(688383)
    assert top.holds and "not applicable" not in top.note


def test_dusart_interval():
    for n in (688383, 10**6):
        c = check_dusart_interval(n)
        assert c.holds and c.status is Status.HOLDS
        a, b = dusart_interval(n)
        count = sympy.primepi(math.floor(b)) - sympy.primepi(math.ceil(a) - 1)
        assert c.rhs == count > 0
    with pytest.raises(DomainError):
        check_dusart_interval(10**5)


def test_prop315():
    assert check_prop315(10).holds
    assert "not applicable" in check_prop315(10).note
    both = check_prop315(344192)
    assert both.holds and "not applicable" not in both.note


@pytest.mark.parametrize("rule, lo", [
    ("mandl", 9), ("mandl_s", 5), ("robin", 2), ("hassani", 10), ("ratio_lower", 3), ("ratio_upper", 3),
    ("sun_lower", 3), ("dusart_lower", 2), ("dusart_upper", 6), ("dusart_lower_refined", 3),
    ("refined_ratio_lower", 3),
])
def test_range_scans_clean_to_1e5(rule, lo):
    rep = scan_rule(rule, lo, 10**5)
    assert rep.checked == 10**5 - lo + 1
    assert rep.violations == [] and rep.inconclusive == []
    assert rep.min_margin > 0 or (rule == "robin" and rep.min_margin >= 0)


def test_upper_dusart_fails_below_its_gate():
    # the classical range starts at 6; the printed statement does not hold at 2..5
    rhs = [n * (math.log(n) + math.log(math.log(n))) for n in range(2, 6)]
    assert any(nth_prime(n) >= r for n, r in zip(range(2, 6), rhs))
    with pytest.raises(DomainError):
        evaluate("dusart_upper", 5)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(RULES)), st.integers(0, 3000))
def test_margin_sign_matches_holds(rule, offset):
    lo = RULES[rule].min_n + offset
    (c,) = evaluate(rule, lo)
    assert c.margin == pytest.approx(c.rhs - c.lhs, rel=1e-12, abs=1e-9)
    assert c.holds == ((c.margin > 0) if c.strict else (c.margin >= 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(9, 20_000))
def test_mandl_exact_against_direct(n):
    c = check_mandl(n)
    assert (c.lhs, c.rhs) == (2 * s_prime(n), n * nth_prime(n))


def test_hit_examples():
    by = {c.name: c for c in check_hit_conjectures(PrimeHit(23, 99, 107934))}
    assert (by["index_lower"].lhs, by["index_lower"].rhs) == (73, 99) and by["index_lower"].holds
    by = {c.name: c for c in check_hit_conjectures(PrimeHit(5, 7, 281))}
    assert by["q_lower"].holds and by["q_lower"].lhs == pytest.approx(270.07, abs=0.01)
    assert by["index_lower"].status is Status.FAILS
    assert by["q_lower_kpk"].status is Status.INFO
    by = {c.name: c for c in check_hit_conjectures(PrimeHit(141, 978, 15501706))}
    assert by["q_lower_m"].status is Status.NOT_APPLICABLE
    assert by["mk_refined"].status is Status.NOT_APPLICABLE


def test_every_rule_reported_once():
    names = [c.name for c in check_hit_conjectures(PrimeHit(1, 1, 5))]
    assert names == list(HIT_RULES)


def test_hit_scan_findings(hits_1e5):
    reps = {r.rule: r for r in scan_hits(hits_1e5)}
    assert reps["index_lower"].violations == [3, 5]
    assert reps["q_lower"].violations == []
    assert reps["q_interval_lower"].violations == [] and reps["q_interval_upper"].violations == []
    assert reps["index_upper"].violations == []
    bad = reps["mk_upper"].violations
    assert len(bad) == 33 and max(bad) <= 103
    assert reps["q_lower_kpk"].violations == [] and 5 in reps["q_lower_kpk"].soft_failures
    assert reps["mk_refined"].checked == 0
    assert kpk_threshold(hits_1e5) == 6


def test_hit_scan_matches_pointwise(hits_1e5):
    sample = hits_1e5[2:60] + hits_1e5[-5:]
    reps = {r.rule: r for r in scan_hits(sample)}
    for h in sample:
        for c in check_hit_conjectures(h):
            assert (c.status is Status.FAILS) == (h.k in reps[c.name].violations)


def test_pi_examples():
    by = {c.name: c for c in check_pi_conjectures(PiCheckpointRow(10**4, 1098, None, None))}
    assert (by["pi_below_prime_pi"].lhs, by["pi_below_prime_pi"].rhs) == (1098, 1229)
    assert by["pi_below_n_over_log"].status is Status.NOT_APPLICABLE
    by = {c.name: c for c in check_pi_conjectures(PiCheckpointRow(10**5, 8350, None, None))}
    assert by["pi_below_n_over_log"].holds
    assert by["pi_below_n_over_log"].rhs == pytest.approx(10**5 / math.log(10**5))
    assert (by["pi_below_sqrt_k1k2"].lhs, by["pi_below_sqrt_k1k2"].rhs) == (8350, 8637)
    assert by["pi_at_least_x0"].status is Status.NOT_APPLICABLE
    assert by["chebyshev_band"].status is Status.INFO
    with pytest.raises(DomainError):
        check_pi_conjectures(PiCheckpointRow(5, 3, None, None))
    assert len(pi_conjecture_sweep([PiCheckpointRow(10**4, 1098, None, None)])) == 6


def test_pi_range_scans(hits_1e5):
    assert scan_pi_rule("pi_below_prime_pi", hits_1e5, 10**5).violations == []
    assert scan_pi_rule("pi_below_n_over_log", hits_1e5, 10**5).violations == []
    with pytest.raises(DomainError):
        scan_pi_rule("pi_at_least_x0", hits_1e5, 10**5)


def test_boundcheck_ok():
    c = BoundCheck("x", 1, 1, 0, False, -1.0, Status.FAILS)
    assert not c.ok
    assert BoundCheck("x", 1, 0, 0, False, 0.0, Status.NOT_APPLICABLE).ok
