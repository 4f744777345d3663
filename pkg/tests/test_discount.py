"""Discount families and the four horizon metrics.

Golden values here are independent closed forms: tail mass via geometric
series or telescoping, effective horizons via explicit halving indices,
and the power-family tail via the pi^2/6 identity. Each enclosure the
package returns must contain the truth and stay within a few ulps of it
when the truth is exactly representable.
"""

from __future__ import annotations

import dataclasses
import math

import pytest

import horizonlab as h
import horizonlab.discount as d
from horizonlab import EnclosureAmbiguous, IntegerInterval, UndefinedMetric


def assert_tight(iv, golden: float, ulps: int = 8) -> None:
    """Both endpoints within `ulps` units in the last place of golden."""
    slack = ulps * math.ulp(max(abs(golden), 1e-300))
    assert golden - slack <= iv.lo <= iv.hi <= golden + slack, (iv, golden)


# -- golden table: quadratic / geometric(0.5) / finite(100) ------------


@pytest.mark.parametrize("k", [1, 10, 100, 1000])
def test_quadratic_metrics_match_closed_forms(k: int) -> None:
    spec = h.quadratic()
    assert math.isclose(d.gamma(spec, k), 1.0 / (k * (k + 1)), rel_tol=1e-15)
    assert_tight(d.gamma_tail(spec, k), 1.0 / k)
    assert d.effective_horizon(spec, k) == IntegerInterval(k, k)
    assert_tight(d.quasi_horizon(spec, k), float(k + 1))
    assert_tight(d.horizon_ratio(spec, k), k / (k + 1.0))


@pytest.mark.parametrize("k", [1, 10, 100, 1000])
def test_geometric_half_metrics_match_closed_forms(k: int) -> None:
    spec = h.geometric(0.5)
    assert d.gamma(spec, k) == 0.5**k
    assert_tight(d.gamma_tail(spec, k), 2.0 * 0.5**k)
    assert d.effective_horizon(spec, k) == IntegerInterval(1, 1)
    assert_tight(d.quasi_horizon(spec, k), 2.0)
    assert_tight(d.horizon_ratio(spec, k), k / 2.0)


@pytest.mark.parametrize("k", [1, 10, 100])
def test_finite_metrics_match_closed_forms(k: int) -> None:
    spec = h.finite(100)
    assert d.gamma(spec, k) == 1.0
    assert_tight(d.gamma_tail(spec, k), float(101 - k))
    assert d.effective_horizon(spec, k) == IntegerInterval(
        math.ceil((101 - k) / 2), math.ceil((101 - k) / 2)
    )
    assert_tight(d.quasi_horizon(spec, k), float(101 - k))
    assert_tight(d.horizon_ratio(spec, k), k / (101.0 - k))


def test_finite_metrics_past_the_horizon_are_undefined() -> None:
    spec = h.finite(100)
    assert d.gamma(spec, 1000) == 0.0
    # The tail is exactly zero, so its enclosure is the point [0, 0] while
    # every metric that divides by it is undefined.
    tail = d.gamma_tail(spec, 1000)
    assert tail.lo == tail.hi == 0.0
    for metric in (d.effective_horizon, d.quasi_horizon, d.horizon_ratio):
        with pytest.raises(UndefinedMetric):
            metric(spec, 1000)


# -- spot values for the remaining families ---------------------------


def test_gamma_spot_values() -> None:
    assert d.gamma(h.quadratic(), 3) == pytest.approx(1.0 / 12, rel=1e-15)
    # Step family: k=5 sits in the third dyadic block.
    assert d.gamma(h.step_log(), 5) == 4.0**-3
    assert d.gamma(h.step_log(), 1) == 1.0
    assert d.gamma(h.finite(10), 11) == 0.0
    assert d.gamma(h.alternating_zero(), 1) == 0.0
    assert d.gamma(h.power(1.0), 4) == pytest.approx(4.0**-2.0, rel=1e-15)


def test_gamma_tail_spot_values() -> None:
    assert_tight(d.gamma_tail(h.quadratic(), 5), 0.2)
    assert_tight(d.gamma_tail(h.geometric(0.5), 3), 0.25)
    # Independent truth: sum_{i>=10} i^-2 = pi^2/6 - sum_{i<10} i^-2.
    true_tail = math.pi**2 / 6 - math.fsum(i**-2 for i in range(1, 10))
    tail = d.gamma_tail(h.power(1.0), 10)
    assert tail.contains(true_tail)
    assert tail.width <= 0.02
    # Step family tail is dyadic and exact: Gamma_1 = 3/2.
    assert_tight(d.gamma_tail(h.step_log(), 1), 1.5, ulps=0)
    assert_tight(d.gamma_tail(h.step_log(), 17), (32 - 17 + 1) * 4.0**-5 + 2.0**-6,
                 ulps=0)


def test_effective_horizon_spot_values() -> None:
    assert d.effective_horizon(h.quadratic(), 7) == IntegerInterval(7, 7)
    assert d.effective_horizon(h.geometric(0.5), 1) == IntegerInterval(1, 1)
    assert d.effective_horizon(h.finite(10), 1) == IntegerInterval(5, 5)
    assert d.effective_horizon(h.step_log(), 17) == IntegerInterval(16, 16)
    # Slow families have quadratic horizons; enclosure brackets 241..273.
    eh = d.effective_horizon(h.harmonic_like(), 17)
    assert eh.lo <= 273 and eh.hi >= 241 and eh.lo >= 17


def test_quasi_horizon_spot_values() -> None:
    assert_tight(d.quasi_horizon(h.quadratic(), 9), 10.0)
    assert_tight(d.quasi_horizon(h.geometric(0.9), 42), 10.0)
    qh = d.quasi_horizon(h.power(1.0), 100)
    # Integral bracket: Gamma_k / gamma_k is within [k, k+1] for eps=1.
    assert qh.lo >= 99.0 and qh.hi <= 102.0 and qh.contains(100.5)
    assert_tight(d.quasi_horizon(h.step_log(), 17), 32.0, ulps=0)


def test_quasi_horizon_undefined_on_zero_weight() -> None:
    # gamma_3 = 0 but the tail is positive: Gamma/gamma is undefined while
    # k*gamma/Gamma is exactly zero.
    with pytest.raises(UndefinedMetric):
        d.quasi_horizon(h.alternating_zero(), 3)
    ratio = d.horizon_ratio(h.alternating_zero(), 3)
    assert ratio.lo == ratio.hi == 0.0


def test_horizon_ratio_spot_values() -> None:
    assert_tight(d.horizon_ratio(h.quadratic(), 4), 0.8)
    assert_tight(d.horizon_ratio(h.geometric(0.75), 8), 2.0)
    # k = e^10 rounded: the ratio for the log-decay family is near 1/10.
    ratio = d.horizon_ratio(h.harmonic_like(), 22026)
    assert ratio.contains(0.1) or abs(ratio.mid - 0.1) < 1e-4
    assert ratio.width < 1e-5


def test_ambiguous_enclosures_are_reported_not_guessed() -> None:
    # At k=1 the power-family brackets cannot certify a halving index.
    with pytest.raises(EnclosureAmbiguous):
        d.effective_horizon(h.power(1.0), 1)


# -- scan and growth diagnostics ---------------------------------------


def test_check_monotone_families() -> None:
    assert d.check_monotone(h.step_log(), 10**4).monotone
    assert d.check_monotone(h.geometric(0.5), 10**4).monotone
    scan = d.check_monotone(h.cosine_modulated(), 10**3)
    assert not scan.monotone
    k = scan.first_violation
    assert k is not None
    assert d.gamma(h.cosine_modulated(), k + 1) > d.gamma(h.cosine_modulated(), k)


def test_growth_diagnostic_classifies_families() -> None:
    grid = h.dyadic_schedule(10**4)
    q = d.growth_diagnostic(h.quadratic(), grid)
    assert q.label_up == "bounded" and q.label_down == "bounded"
    g = d.growth_diagnostic(h.geometric(0.5), grid)
    assert g.label_up == "diverging" and g.label_down == "bounded"
    hm = d.growth_diagnostic(h.harmonic_like(), grid)
    assert hm.label_up == "bounded" and hm.label_down == "diverging"


def test_patched_family_construction() -> None:
    # No thresholds: plain geometric decay, monotone.
    p0 = d.build_patched([])
    assert [d.gamma(p0, k) for k in range(1, 6)] == [1.0, 0.5, 0.25, 0.125, 0.0625]
    assert d.check_monotone(p0, 10**3).monotone
    # One threshold: witnesses realize both excursions of k*gamma_k/Gamma_k.
    p1 = d.build_patched([1])
    up_w, down_w = d.patched_witnesses(p1)
    assert up_w and down_w
    grid = sorted(set(h.dyadic_schedule(2**14)) | set(up_w) | set(down_w))
    diag = d.growth_diagnostic(p1, grid)
    assert diag.sup_ratio_up > 1.0 and diag.sup_ratio_down > 1.0
    # Two thresholds: still a valid nonincreasing discount.
    assert d.check_monotone(d.build_patched([1, 2]), 10**4).monotone


# -- scale invariance and serialization --------------------------------


@pytest.mark.parametrize("spec", [
    h.quadratic(), h.geometric(0.7), h.finite(64), h.power(1.5),
    h.harmonic_like(), h.step_log(),
])
def test_horizon_metrics_are_scale_free(spec) -> None:
    scaled = dataclasses.replace(spec, scale=3.0)
    for k in (1, 5, 17, 100):
        for metric in (d.effective_horizon, d.quasi_horizon, d.horizon_ratio):
            try:
                base = metric(spec, k)
            except (UndefinedMetric, EnclosureAmbiguous) as exc:
                # Whatever is undecidable must be undecidable at any scale.
                with pytest.raises(type(exc)):
                    metric(scaled, k)
                continue
            assert metric(scaled, k) == base
        assert d.gamma(scaled, k) == pytest.approx(3.0 * d.gamma(spec, k),
                                                   rel=1e-15)


@pytest.mark.parametrize("spec", [
    h.quadratic(), h.geometric(0.3), h.finite(100), h.power(0.8),
    h.harmonic_like(), h.step_log(), h.alternating_zero(),
    h.cosine_modulated(), d.build_patched([1, 2]),
    d.custom([1.0, 0.5, 0.25], tail=("geometric", 0.5)),
])
def test_discount_serialization_round_trips(spec) -> None:
    restored = d.spec_from_dict(d.spec_to_dict(spec))
    assert restored == spec
    for k in (1, 2, 3, 7, 20):
        assert d.gamma(restored, k) == d.gamma(spec, k)
