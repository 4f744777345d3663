"""Average and discounted value computation plus limit scanning.

Oracles: exact rational averages for run prefixes (ones counts divide
evenly), the closed form 1/(1+g) vs g/(1+g) for the 10-periodic reward
under geometric decay, and the independent summation oracle in
oracles.py for spot cross-checks of discounted enclosures.
"""

from __future__ import annotations

import math

import pytest

import horizonlab as h
import horizonlab.discount as d
import horizonlab.reward as r
import horizonlab.value as v
from horizonlab import InconclusiveEnclosure, Interval

import oracles


# -- exact averages -----------------------------------------------------


def test_average_of_period_two_prefix_is_half() -> None:
    assert v.avg_value(h.periodic([1.0, 0.0]), 6) == 0.5


@pytest.mark.parametrize("n", range(2, 9))
def test_average_before_run_start_is_exactly_one_third(n: int) -> None:
    # Up to k_n - 1 = 4^(n-1) - 1 steps, exactly (4^(n-1) - 1)/3 are ones.
    k_n = r.change_points(h.exponential_runs(), n)[0]
    assert v.avg_value(h.exponential_runs(), k_n - 1) == 1.0 / 3.0


def test_average_of_linear_runs_approaches_half() -> None:
    assert abs(v.avg_value(h.linear_runs(), 10**6) - 0.5) < 1e-2


def test_future_average_examples() -> None:
    assert v.avg_value_from(h.linear_runs(), 5, 5) == 1.0
    assert v.avg_value_from(h.linear_runs(), 2, 2) == 0.0
    assert v.avg_value_from(h.periodic([1.0, 0.0]), 2, 5) == 0.5
    got = v.avg_value_from(h.linear_runs(), 5 * 10**5, 10**6)
    lo, hi = oracles.avg_bounds("linear", None, 5 * 10**5, 10**6)
    assert lo <= got <= hi
    assert abs(got - 0.5) < 2e-2


def test_average_decomposition_identity() -> None:
    # m U_1m = (k-1) U_1,k-1 + (m-k+1) U_km.
    spec = h.linear_runs()
    k, m = 17, 1000
    lhs = m * v.avg_value(spec, m)
    rhs = (k - 1) * v.avg_value(spec, k - 1) + (m - k + 1) * v.avg_value_from(
        spec, k, m)
    assert lhs == pytest.approx(rhs, rel=1e-12)


# -- discounted enclosures ----------------------------------------------


@pytest.mark.parametrize("g", [0.3, 0.5, 0.9])
def test_period_two_geometric_closed_form(g: float) -> None:
    rspec = h.periodic([1.0, 0.0])
    dspec = h.geometric(g)
    for k in range(1, 51):
        want = 1.0 / (1.0 + g) if k % 2 == 1 else g / (1.0 + g)
        iv = v.disc_value(rspec, dspec, k, tol=1e-7)
        assert abs(iv.mid - want) < 1e-6, (g, k)
        assert iv.width < 1e-6


def test_constant_reward_collapses_to_a_point() -> None:
    det = v.disc_value_detail(h.constant(0.7), h.power(1.5), 9)
    assert det.interval == Interval(0.7, 0.7)
    assert det.path == "constant" and det.attained


def test_linear_quadratic_value_near_half() -> None:
    iv = v.disc_value(h.linear_runs(), h.quadratic(), 10**4, tol=1e-4)
    assert iv.lo >= 0.47 and iv.hi <= 0.53
    assert iv.width <= 2e-4


@pytest.mark.parametrize("rspec,kind,payload,dspec,fam,params,k", [
    (h.linear_runs(), "linear", None, h.quadratic(), "quadratic", (), 4321),
    (h.linear_runs(), "linear", None, h.geometric(0.9), "geometric", (0.9,), 2000),
    (h.exponential_runs(), "exponential", None, h.step_log(), "step_log", (), 17),
    (h.periodic([1.0, 0.0]), "periodic", [1.0, 0.0], h.geometric(0.5),
     "geometric", (0.5,), 13),
    (h.linear_runs(), "linear", None, h.finite(5000), "finite", (5000,), 123),
])
def test_discounted_values_agree_with_independent_summation(
    rspec, kind, payload, dspec, fam, params, k
) -> None:
    olo, ohi = oracles.disc_bounds(kind, payload, fam, params, k, n_terms=10**7)
    got = v.disc_value(rspec, dspec, k, tol=1e-3)
    assert got.lo <= ohi and olo <= got.hi, (got, (olo, ohi))
    if got.width >= ohi - olo:
        # The oracle is tighter, so its midpoint must land inside.
        assert got.lo <= 0.5 * (olo + ohi) <= got.hi


def test_deep_geometric_indices_stay_finite_and_tight() -> None:
    det = v.disc_value_detail(h.linear_runs(), h.geometric(0.5), 10**6 + 3,
                              tol=1e-6)
    assert 0.0 <= det.interval.lo <= det.interval.hi <= 1.0
    assert det.interval.width < 1e-6
    assert det.attained


def test_discounted_value_is_scale_free() -> None:
    import dataclasses
    base = h.quadratic()
    scaled = dataclasses.replace(base, scale=7.0)
    for k in (1, 9, 170):
        assert v.disc_value(h.linear_runs(), base, k) == v.disc_value(
            h.linear_runs(), scaled, k)


def test_value_recurrence_holds_as_enclosures() -> None:
    # V_k Gamma_k = gamma_k r_k + V_{k+1} Gamma_{k+1}.
    rspec, dspec = h.linear_runs(), h.quadratic()
    for k in (1, 4, 9, 40):
        lhs = v.disc_value(rspec, dspec, k, tol=1e-9) * d.gamma_tail(dspec, k)
        rhs = Interval.exact(d.gamma(dspec, k) * r.reward_at(rspec, k)) + (
            v.disc_value(rspec, dspec, k + 1, tol=1e-9)
            * d.gamma_tail(dspec, k + 1))
        assert lhs.intersects(rhs), (k, lhs, rhs)


def test_strict_mode_raises_when_tolerance_unattainable() -> None:
    with pytest.raises(InconclusiveEnclosure) as exc_info:
        v.disc_value_detail(h.linear_runs(), h.cosine_modulated(), 3,
                            tol=1e-13, strict=True)
    detail = exc_info.value.detail
    assert not detail.attained
    assert detail.interval.width > 1e-13
    lax = v.disc_value_detail(h.linear_runs(), h.cosine_modulated(), 3,
                              tol=1e-13, strict=False)
    assert not lax.attained
    assert lax.interval.intersects(detail.interval)


def test_truncation_depth_grows_as_tolerance_shrinks() -> None:
    loose = v.disc_value_detail(h.linear_runs(), h.quadratic(), 10, tol=1e-3)
    tight = v.disc_value_detail(h.linear_runs(), h.quadratic(), 10, tol=1e-7)
    assert tight.truncation >= loose.truncation
    assert tight.interval.width <= loose.interval.width


# -- structured subsequences -------------------------------------------


def test_run_boundary_values_split_under_geometric_decay() -> None:
    at_k = v.subsequence_values(h.linear_runs(), h.geometric(0.5), "at_k_n",
                                range(5, 11))
    at_m = v.subsequence_values(h.linear_runs(), h.geometric(0.5), "at_m_n",
                                range(5, 11))
    assert all(iv.lo > 0.99 for iv in at_k[2:])
    assert all(iv.hi < 0.01 for iv in at_m[2:])
    # Monotone separation as the runs lengthen.
    assert at_k[-1].lo >= at_k[0].lo - 1e-12
    assert at_m[-1].hi <= at_m[0].hi + 1e-12


def test_subsequence_values_edge_specs() -> None:
    # Constant rewards need no run structure: V is the constant everywhere.
    flat = v.subsequence_values(h.constant(0.5), h.geometric(0.5), "at_k_n",
                                [1, 2, 3])
    assert all(iv.lo == iv.hi == 0.5 for iv in flat)
    with pytest.raises(ValueError):
        v.subsequence_values(h.periodic([1.0, 0.0]), h.geometric(0.5),
                             "at_k_n", [1])
    with pytest.raises(ValueError):
        v.subsequence_values(h.linear_runs(), h.geometric(0.5), "sideways", [1])


# -- limit scans --------------------------------------------------------


def test_dyadic_schedule_shape() -> None:
    assert v.dyadic_schedule(10) == [1, 2, 4, 8, 10]
    assert v.dyadic_schedule(10, start=3) == [3, 6, 10]
    sched = v.dyadic_schedule(10**6)
    assert sched[0] == 1 and sched[-1] == 10**6
    assert all(a < b for a, b in zip(sched, sched[1:]))


def test_average_scan_of_linear_runs_converges_to_half() -> None:
    est = v.limit_scan(h.linear_runs(), None, "U", v.dyadic_schedule(10**5),
                       tol=1e-2)
    assert est.quantity == "U"
    assert est.verdict == "converged"
    assert 0.48 <= est.band.lo and est.band.hi <= 0.52
    assert est.band.contains(0.5)


def test_average_scan_of_exponential_runs_oscillates() -> None:
    est = v.limit_scan(h.exponential_runs(), None, "U",
                       v.dyadic_schedule(4**8))
    assert est.verdict == "oscillating"
    assert abs(est.alpha - 1.0 / 3.0) < 1e-3
    assert abs(est.beta - 2.0 / 3.0) < 1e-3
    assert est.liminf_est.hi < est.limsup_est.lo


def test_discounted_scan_of_period_two_geometric_oscillates() -> None:
    est = v.limit_scan(h.periodic([1.0, 0.0]), h.geometric(0.5), "V",
                       v.dyadic_schedule(10**4))
    assert est.quantity == "V"
    assert est.verdict == "oscillating"
    assert abs(est.alpha - 1.0 / 3.0) < 1e-3
    assert abs(est.beta - 2.0 / 3.0) < 1e-3


def test_discounted_scan_skips_zero_tail_points() -> None:
    est = v.limit_scan(h.linear_runs(), h.finite(100), "V",
                       v.dyadic_schedule(1000))
    assert max(est.indices) <= 100
    assert any("skipped" in note and "zero tail" in note for note in est.notes)


def test_scan_serialization_helpers_are_consistent() -> None:
    est = v.limit_scan(h.linear_runs(), None, "U", v.dyadic_schedule(10**3))
    payload = v.limit_estimate_to_dict(est)
    assert payload["quantity"] == "U"
    assert payload["verdict"] == est.verdict
    rows = v.limit_estimate_csv_rows(est)
    assert rows[0][0] == "index"
    assert len(rows) - 1 == len(est.indices)
