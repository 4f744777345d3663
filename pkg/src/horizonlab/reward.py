"""Reward sequences: bounded values in [0,1], binary runs via change points.

A binary run sequence is described by change points
k_1 < m_1 < k_2 < m_2 < ... with r_i = 1 on [k_n, m_n) and r_i = 0 on
[m_n, k_{n+1}). Run lengths A_n = m_n - k_n (ones) and B_n = k_{n+1} - m_n
(zeros) drive all limit formulas; the discount masses of the runs are
a_n = Gamma_{k_n} - Gamma_{m_n} and b_n = Gamma_{m_n} - Gamma_{k_{n+1}}.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import discount as _disc
from .intervals import Interval


@dataclass(frozen=True)
class RewardSpec:
    """Immutable description of a reward sequence.

    family: constant | periodic | binary_runs | custom.
    params: family-specific tuple (see constructors).
    """

    family: str
    params: tuple = ()


def constant(alpha: float) -> RewardSpec:
    """r_k = alpha for every k."""
    a = float(alpha)
    if not (0.0 <= a <= 1.0):
        raise ValueError("constant reward must lie in [0,1]")
    return RewardSpec("constant", (a,))


def periodic(pattern: Sequence[float]) -> RewardSpec:
    """r_k cycles through the pattern starting at k = 1."""
    pat = tuple(float(x) for x in pattern)
    if not pat:
        raise ValueError("periodic pattern must be nonempty")
    if any(not (0.0 <= x <= 1.0) for x in pat):
        raise ValueError("periodic pattern values must lie in [0,1]")
    return RewardSpec("periodic", (pat,))


def linear_runs() -> RewardSpec:
    """1 0 0 1 1 1 0 0 0 0 ...: run lengths 1,2,3,4,...

    Change points k_n = (2n-1)(n-1)+1, m_n = (2n-1)n+1, so A_n = 2n-1 and
    B_n = 2n. Both run-fraction sequences tend to 1/2.
    """
    return RewardSpec("binary_runs", ("linear",))


def exponential_runs() -> RewardSpec:
    """1 00 1111 00000000 ...: run lengths 1,2,4,8,...

    Change points k_n = 4^(n-1), m_n = 2 * 4^(n-1), so A_n = k_n and
    B_n = m_n. The prefix averages oscillate between 1/3 and 2/3.
    """
    return RewardSpec("binary_runs", ("exponential",))


def explicit_change_points(flat: Sequence[int]) -> RewardSpec:
    """Binary runs from an explicit flat list [k_1, m_1, k_2, m_2, ...].

    Beyond the last stored boundary the reward keeps its current value
    (an odd-length list ends inside a 1-run that then extends forever).
    """
    pts = tuple(int(x) for x in flat)
    if len(pts) < 2:
        raise ValueError("need at least k_1 and m_1")
    if pts[0] < 1 or any(b <= a for a, b in zip(pts, pts[1:])):
        raise ValueError("change points must be strictly increasing and >= 1")
    return RewardSpec("binary_runs", ("explicit", pts))


def custom_table(values: Sequence[float]) -> RewardSpec:
    """Explicit rewards for k = 1..len(values); out-of-table queries raise."""
    vals = tuple(float(x) for x in values)
    if not vals:
        raise ValueError("custom table must be nonempty")
    if any(not (0.0 <= x <= 1.0) for x in vals):
        raise ValueError("custom rewards must lie in [0,1]")
    return RewardSpec("custom", (vals,))


def is_binary_runs(spec: RewardSpec) -> bool:
    return spec.family == "binary_runs"


# ---------------------------------------------------------------------------
# Point evaluation
# ---------------------------------------------------------------------------


def reward_at(spec: RewardSpec, k: int) -> float:
    """r_k."""
    if k < 1:
        raise ValueError("index k must be >= 1")
    fam = spec.family
    if fam == "constant":
        return spec.params[0]
    if fam == "periodic":
        pat = spec.params[0]
        return pat[(k - 1) % len(pat)]
    if fam == "custom":
        table = spec.params[0]
        if k > len(table):
            raise ValueError(f"index {k} beyond custom reward table")
        return table[k - 1]
    gen = spec.params[0]
    if gen == "explicit":
        pts = spec.params[1]
        return float(bisect_right(pts, k) % 2)
    kn, mn = _run_containing(spec, k)
    return 1.0 if kn <= k < mn else 0.0


def _run_containing(spec: RewardSpec, k: int) -> Tuple[int, int]:
    """(k_n, m_n) of the run block [k_n, k_{n+1}) containing k."""
    gen = spec.params[0]
    if gen == "linear":
        # k_n = 2n^2 - 3n + 2 <= k: solve the quadratic, then correct
        n = max(1, (3 + math.isqrt(max(8 * k - 7, 1))) // 4)
        while _linear_k(n + 1) <= k:
            n += 1
        while n > 1 and _linear_k(n) > k:
            n -= 1
        return _linear_k(n), _linear_m(n)
    if gen == "exponential":
        n = max(1, ((k.bit_length() - 1) // 2) + 1)
        while 4**n <= k:
            n += 1
        while n > 1 and 4 ** (n - 1) > k:
            n -= 1
        return 4 ** (n - 1), 2 * 4 ** (n - 1)
    raise ValueError(f"not a generated run family: {gen}")


def _linear_k(n: int) -> int:
    return (2 * n - 1) * (n - 1) + 1


def _linear_m(n: int) -> int:
    return (2 * n - 1) * n + 1


def change_points(spec: RewardSpec, n: int) -> Tuple[int, int]:
    """(k_n, m_n), the boundaries of the nth 1-run."""
    if not is_binary_runs(spec):
        raise ValueError("change points are defined for binary run specs only")
    if n < 1:
        raise ValueError("run index n must be >= 1")
    gen = spec.params[0]
    if gen == "linear":
        return _linear_k(n), _linear_m(n)
    if gen == "exponential":
        return 4 ** (n - 1), 2 * 4 ** (n - 1)
    pts = spec.params[1]
    if 2 * n > len(pts):
        raise ValueError(f"run {n} beyond stored change points")
    return pts[2 * n - 2], pts[2 * n - 1]


def next_run_start(spec: RewardSpec, n: int) -> int:
    """k_{n+1}; for explicit lists this may be beyond storage (raises)."""
    return change_points(spec, n + 1)[0]


def run_count(spec: RewardSpec) -> Optional[int]:
    """Number of fully stored runs, or None when the generator is infinite."""
    if not is_binary_runs(spec):
        raise ValueError("run count is defined for binary run specs only")
    gen = spec.params[0]
    if gen == "explicit":
        return len(spec.params[1]) // 2
    return None


# ---------------------------------------------------------------------------
# Counting and run statistics
# ---------------------------------------------------------------------------


def ones_count(spec: RewardSpec, m: int) -> int:
    """Exact number of 1-rewards among r_1..r_m for binary run specs."""
    if not is_binary_runs(spec):
        raise ValueError("ones count is defined for binary run specs only")
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return 0
    gen = spec.params[0]
    total = 0
    if gen == "explicit":
        pts = spec.params[1]
        for i in range(0, len(pts), 2):
            kn = pts[i]
            if kn > m:
                break
            mn = pts[i + 1] if i + 1 < len(pts) else m + 1
            total += min(mn - 1, m) - kn + 1
        return total
    n = 1
    while True:
        kn, mn = change_points(spec, n)
        if kn > m:
            return total
        total += min(mn - 1, m) - kn + 1
        n += 1


@dataclass(frozen=True)
class RunStats:
    n: int
    k_n: int
    m_n: int
    a_len: int  # A_n, ones in run n
    b_len: int  # B_n, zeros after run n
    a_mass: Interval  # Gamma_{k_n} - Gamma_{m_n}
    b_mass: Interval  # Gamma_{m_n} - Gamma_{k_{n+1}}


def run_stats(spec: RewardSpec, disc: _disc.DiscountSpec, n: int) -> RunStats:
    """Lengths and discount masses of the nth run pair."""
    kn, mn = change_points(spec, n)
    k_next = next_run_start(spec, n)
    g_k, g_m, g_next = _disc.gamma_tail_batch(disc, [kn, mn, k_next])
    a = _nonneg(g_k - g_m)
    b = _nonneg(g_m - g_next)
    return RunStats(n, kn, mn, mn - kn, k_next - mn, a, b)


def _nonneg(iv: Interval) -> Interval:
    if iv.hi < 0.0:
        return Interval.exact(0.0)
    return Interval(max(iv.lo, 0.0), iv.hi)


@dataclass(frozen=True)
class LimitSequences:
    """Run-fraction sequences with purely diagnostic limit predictions.

    alpha_seq approaches the limit inferior of the prefix quantity, and
    beta_seq its limit superior, when the respective ratios converge.
    Predictions are last-window means widened by the observed drift;
    they are evidence, not ground truth.
    """

    alpha_seq: List[Interval]
    beta_seq: List[Interval]
    alpha_pred: Interval
    beta_pred: Interval


def _window_prediction(values: List[Interval]) -> Interval:
    w = max(1, math.ceil(len(values) / 4))
    tail = values[-w:]
    mid = sum(v.mid for v in tail) / len(tail)
    lo = min(v.lo for v in tail)
    hi = max(v.hi for v in tail)
    drift = (hi - lo) * 0.5
    return Interval.widened(min(mid - drift, lo), max(mid + drift, hi))


def lemma1_limits(spec: RewardSpec, n_max: int) -> LimitSequences:
    """A_n/(A_n+B_n) and A_n/(B_{n-1}+A_n) for n <= n_max (B_0 := 0).

    The first sequence tracks the limit inferior of the prefix average,
    the second its limit superior; both are exact rationals reported as
    correctly rounded floats (degenerate intervals).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    alpha: List[Interval] = []
    beta: List[Interval] = []
    b_prev = 0  # B_0 := 0
    for n in range(1, n_max + 1):
        kn, mn = change_points(spec, n)
        a_len = mn - kn
        b_len = next_run_start(spec, n) - mn
        alpha.append(Interval.exact(float(Fraction(a_len, a_len + b_len))))
        beta.append(Interval.exact(float(Fraction(a_len, b_prev + a_len))))
        b_prev = b_len
    return LimitSequences(alpha, beta, _window_prediction(alpha), _window_prediction(beta))


def lemma2_limits(
    spec: RewardSpec, disc: _disc.DiscountSpec, n_max: int
) -> LimitSequences:
    """a_{n+1}/(b_n+a_{n+1}) and a_n/(a_n+b_n) for n <= n_max.

    The first sequence tracks the limit inferior of the discounted value,
    the second its limit superior (both along the run subsequences).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    # one batched Gamma pass over all needed boundaries
    bounds: List[int] = []
    for n in range(1, n_max + 2):
        kn, mn = change_points(spec, n)
        bounds.extend([kn, mn])
    tails = _disc.gamma_tail_batch(disc, bounds)
    a = [
        _nonneg(tails[2 * i] - tails[2 * i + 1]) for i in range(n_max + 1)
    ]  # a_1..a_{n_max+1}
    b = [
        _nonneg(tails[2 * i + 1] - tails[2 * i + 2]) for i in range(n_max)
    ]  # b_1..b_{n_max}
    alpha = [a[n] / (b[n - 1] + a[n]) for n in range(1, n_max + 1)]
    beta = [a[n - 1] / (a[n - 1] + b[n - 1]) for n in range(1, n_max + 1)]
    alpha = [iv.clamp(0.0, 1.0) for iv in alpha]
    beta = [iv.clamp(0.0, 1.0) for iv in beta]
    return LimitSequences(alpha, beta, _window_prediction(alpha), _window_prediction(beta))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def reward_to_dict(spec: RewardSpec) -> dict:
    fam = spec.family
    if fam == "constant":
        return {"family": fam, "alpha": spec.params[0]}
    if fam == "periodic":
        return {"family": fam, "pattern": list(spec.params[0])}
    if fam == "custom":
        return {"family": fam, "table": list(spec.params[0])}
    gen = spec.params[0]
    out = {"family": fam, "generator": gen}
    if gen == "explicit":
        out["change_points"] = list(spec.params[1])
    return out


def reward_from_dict(d: dict) -> RewardSpec:
    fam = d["family"]
    if fam == "constant":
        return constant(d["alpha"])
    if fam == "periodic":
        return periodic(d["pattern"])
    if fam == "custom":
        return custom_table(d["table"])
    if fam == "binary_runs":
        gen = d["generator"]
        if gen == "linear":
            return linear_runs()
        if gen == "exponential":
            return exponential_runs()
        if gen == "explicit":
            return explicit_change_points(d["change_points"])
        raise ValueError(f"unknown run generator {gen!r}")
    raise ValueError(f"unknown reward family {fam!r}")
