"""(r,Q) continuous-review policy measures built on the loss layer.

The demand argument is the lead-time demand distribution itself;
assembling it from per-period demand and a lead time is a modeling step
that happens before this module. Both steady-state measures are plain
loss-function differences, so they inherit the accuracy of the closed
forms at any reorder point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import Distribution
from .errors import ConvergenceError, DomainError, ParameterError
from .loss import loss1, loss2


@dataclass(frozen=True)
class PolicyParams:
    """Reorder point r and order quantity q, in units of demand."""

    r: float
    q: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "q", float(self.q))
        if not math.isfinite(self.r):
            raise ParameterError(f"reorder point must be finite, got {self.r!r}")
        if not (self.q > 0.0 and math.isfinite(self.q)):
            raise ParameterError(f"order quantity must be a positive real, got {self.q!r}")


@dataclass(frozen=True)
class PolicyMeasures:
    """Steady-state stock-out probability and average backorder level."""

    stockout_frequency: float
    expected_backorders: float


def _check_discrete_policy(demand: Distribution, policy: PolicyParams) -> None:
    if demand.discrete:
        if policy.r != math.floor(policy.r) or policy.r < 0.0:
            raise DomainError(
                f"discrete demand requires integer r >= 0, got r={policy.r!r}")
        if policy.q != math.floor(policy.q) or policy.q < 1.0:
            raise DomainError(
                f"discrete demand requires integer Q >= 1, got Q={policy.q!r}")


def evaluate_policy(demand: Distribution, policy: PolicyParams) -> PolicyMeasures:
    """Stock-out frequency (L1(r) - L1(r+Q))/Q and expected backorders
    (L2(r) - L2(r+Q))/Q.

    Rounding can push the frequency a few ulp outside [0, 1]; it is
    clamped back silently, as is a tiny negative backorder residue.
    """
    _check_discrete_policy(demand, policy)
    r, q = policy.r, policy.q
    freq = (loss1(demand, r) - loss1(demand, r + q)) / q
    back = (loss2(demand, r) - loss2(demand, r + q)) / q
    return PolicyMeasures(min(max(freq, 0.0), 1.0), max(back, 0.0))


def min_reorder_point(demand: Distribution, q: float,
                      max_stockout_frequency: float) -> float:
    """Smallest r whose stock-out frequency is at or below the target.

    The frequency is nonincreasing in r and falls to 0, so the search is
    well defined for any target in (0, 1): integer doubling plus binary
    search for discrete demand, bisection to absolute tolerance 1e-8 for
    continuous demand.
    """
    target = float(max_stockout_frequency)
    if not 0.0 < target < 1.0:
        raise DomainError(
            f"target stock-out frequency must lie strictly in (0, 1), got {target!r}")

    def freq(r: float) -> float:
        return evaluate_policy(demand, PolicyParams(r, q)).stockout_frequency

    if demand.discrete:
        _check_discrete_policy(demand, PolicyParams(0.0, q))
        if freq(0) <= target:
            return 0.0
        lo, hi = 0, 1
        for _ in range(200):
            if freq(hi) <= target:
                break
            lo, hi = hi, hi * 2
        else:
            raise ConvergenceError(f"no reorder point below 2**200 for {demand!r}")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if freq(mid) <= target:
                hi = mid
            else:
                lo = mid
        return float(hi)

    scale = max(math.sqrt(demand.variance), 1.0)
    a = demand.mean
    b = demand.mean
    if freq(a) > target:
        for _ in range(200):
            b = b + scale
            if freq(b) <= target:
                break
            scale *= 2.0
        else:
            raise ConvergenceError(f"stock-out frequency never reached {target!r} for {demand!r}")
    else:
        for _ in range(200):
            a = a - scale
            if freq(a) > target:
                break
            b = a
            scale *= 2.0
        else:
            # even far below the support the target is met; any r works
            return a
    for _ in range(200):
        if b - a <= 1e-8:
            break
        mid = 0.5 * (a + b)
        if freq(mid) <= target:
            b = mid
        else:
            a = mid
    return b
