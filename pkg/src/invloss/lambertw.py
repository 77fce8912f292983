"""Real lower branch W_{-1} of the Lambert W function.

Solves w * exp(w) = x for the branch with w <= -1, defined on [-1/e, 0).
This is the branch needed to invert the logarithmic distribution's mean
equation, where the principal branch would return the wrong root.
"""
from __future__ import annotations

import math

from .errors import ConvergenceError, DomainError

BRANCH_POINT = -math.exp(-1.0)


def lambert_w_neg1(x: float) -> float:
    """Evaluate W_{-1}(x) for -1/e <= x < 0.

    The result w satisfies w <= -1 and w*exp(w) = x with relative residual
    at most 1e-12. Outside the domain a DomainError is raised.
    """
    x = float(x)
    if not (x >= BRANCH_POINT and x < 0.0):
        raise DomainError(f"lambert_w_neg1 requires -1/e <= x < 0, got {x!r}")

    # 1 + e*x >= 0 up to rounding; clamp the few-ulp negative case at the branch point
    t = 1.0 + math.e * x
    if t < 0.0:
        t = 0.0
    s = math.sqrt(2.0 * t)
    if s < 1e-4:
        # branch-point series, truncation error O(s^4) < 1e-16 here
        return -1.0 - s - s * s / 3.0 - 11.0 * s**3 / 72.0

    if x < -0.25:
        # series seed is within ~1e-2 of the root on this stretch
        w = -1.0 - s - s * s / 3.0 - 11.0 * s**3 / 72.0 - 43.0 * s**4 / 540.0
        for _ in range(64):
            ew = math.exp(w)
            f = w * ew - x
            wp1 = w + 1.0
            denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
            step = f / denom
            w -= step
            if abs(step) <= 4e-16 * abs(w):
                break
    else:
        # far from the branch point; iterate on w + ln(-w) = ln(-x), which
        # stays finite even when exp(w) underflows
        lx = math.log(-x)
        llx = math.log(-lx)
        w = lx - llx + llx / lx
        for _ in range(64):
            g = w + math.log(-w) - lx
            step = g / (1.0 + 1.0 / w)
            w -= step
            if abs(step) <= 4e-16 * abs(w):
                break

    if w > -1.0:
        w = -1.0
    residual = abs(math.expm1(w + math.log(-w) - math.log(-x)))
    if residual > 1e-12:
        raise ConvergenceError(
            f"lambert_w_neg1 failed to converge at x={x!r}: relative residual {residual:.3e}"
        )
    return w
