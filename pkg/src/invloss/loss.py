"""Closed-form loss functions over the demand distributions.

Four quantities per distribution, all exact in the elementary and special
functions of the underlying family:

  loss1(d, r)                  E[(X - r)+]        expected shortage
  loss_c(d, r)                 E[(r - X)+]        expected surplus
  loss2(d, r)                  second-order shortage; for discrete X it is
                               E[(X-r)+ (X-r-1)+] / 2, for continuous X it
                               is the integral of (x-r)^2 f(x) / 2 over x>r
  limited_expected_value(d, r) E[min(X, r)]

Discrete families accept integer r >= 0 only; continuous families accept
any real r, with the exact below-support limits built in. Tiny negative
rounding residues are clamped to zero, which every formula here permits
because the true values are nonnegative (limited_expected_value carries no
clamp: it is signed for the normal).
"""
from __future__ import annotations

import math
from enum import Enum

from scipy import special as _sp

from .distributions import (
    Distribution,
    Exponential,
    Gamma,
    Geometric,
    Logarithmic,
    LogNormal,
    NegativeBinomial,
    Normal,
    Poisson,
)
from .errors import DomainError


class LossKind(Enum):
    """Names of the four loss-style operations, as spelled on the CLI."""

    FIRST_ORDER = "L1"
    COMPLEMENTARY = "Lc"
    SECOND_ORDER = "L2"
    LIMITED_EXPECTED_VALUE = "Le"


def _validate_r(dist: Distribution, r: float) -> float:
    rf = float(r)
    if not math.isfinite(rf):
        raise DomainError(f"r must be finite, got {r!r}")
    if dist.discrete:
        if rf != math.floor(rf) or rf < 0.0:
            raise DomainError(f"discrete distribution requires integer r >= 0, got r={r!r}")
    return rf


def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def loss1(dist: Distribution, r: float) -> float:
    """Expected amount by which demand exceeds r: E[(X - r)+]."""
    r = _validate_r(dist, r)

    if isinstance(dist, NegativeBinomial):
        n, p = dist.n, dist.p
        m = n * p / (1.0 - p)
        shifted = NegativeBinomial(n + 1.0, p)
        v = m * shifted.survival(r - 2) - r * dist.survival(r - 1)
        return max(v, 0.0)

    if isinstance(dist, Geometric):
        return math.exp(r * math.log1p(-dist.p)) / dist.p

    if isinstance(dist, Logarithmic):
        if r < 1.0:
            return dist.mean
        b, p = -1.0 / math.log1p(-dist.p), dist.p
        pr = math.exp(r * math.log(p))
        v = b * pr / (1.0 - p) - r * dist.survival(r - 1)
        return max(v, 0.0)

    if isinstance(dist, Poisson):
        lam = dist.lam
        v = (lam - r) * dist.survival(r) + lam * dist.density(r)
        return max(v, 0.0)

    if isinstance(dist, Normal):
        z = (r - dist.mu) / dist.sigma
        v = (dist.mu - r) * float(_sp.ndtr(-z)) + dist.sigma * _phi(z)
        return max(v, 0.0)

    if isinstance(dist, Gamma):
        a, b = dist.alpha, dist.beta
        shifted = Gamma(a + 1.0, b)
        v = (a / b) * shifted.survival(r) - r * dist.survival(r)
        return max(v, 0.0)

    if isinstance(dist, LogNormal):
        m = dist.mean
        if r <= 0.0:
            return m - r
        s = dist.sigma
        lr = math.log(r)
        p2 = (lr - dist.mu - s * s) / s
        p3 = (lr - dist.mu) / s
        v = m * float(_sp.ndtr(-p2)) - r * float(_sp.ndtr(-p3))
        return max(v, 0.0)

    if isinstance(dist, Exponential):
        b = dist.beta
        if r < 0.0:
            return 1.0 / b - r
        return math.exp(-b * r) / b

    raise TypeError(f"unsupported distribution type: {type(dist).__name__}")


def loss_c(dist: Distribution, r: float) -> float:
    """Expected amount by which r exceeds demand: E[(r - X)+]."""
    r = _validate_r(dist, r)

    if isinstance(dist, NegativeBinomial):
        n, p = dist.n, dist.p
        m = n * p / (1.0 - p)
        shifted = NegativeBinomial(n + 1.0, p)
        v = r * dist.cdf(r - 1) - m * shifted.cdf(r - 2)
        return max(v, 0.0)

    if isinstance(dist, Geometric):
        p = dist.p
        v = (math.expm1(r * math.log1p(-p)) + p * r) / p
        return max(v, 0.0)

    if isinstance(dist, Logarithmic):
        if r < 1.0:
            return 0.0
        b, p = -1.0 / math.log1p(-dist.p), dist.p
        # sum_{x<=r} x f(x) = beta p (1 - p^r) / (1 - p)
        partial_mean = b * p * (-math.expm1(r * math.log(p))) / (1.0 - p)
        v = r * dist.cdf(r) - partial_mean
        return max(v, 0.0)

    if isinstance(dist, Poisson):
        lam = dist.lam
        v = (r - lam) * dist.cdf(r) + lam * dist.density(r)
        return max(v, 0.0)

    if isinstance(dist, Normal):
        z = (r - dist.mu) / dist.sigma
        v = (r - dist.mu) * float(_sp.ndtr(z)) + dist.sigma * _phi(z)
        return max(v, 0.0)

    if isinstance(dist, Gamma):
        if r <= 0.0:
            return 0.0
        a, b = dist.alpha, dist.beta
        shifted = Gamma(a + 1.0, b)
        v = r * dist.cdf(r) - (a / b) * shifted.cdf(r)
        return max(v, 0.0)

    if isinstance(dist, LogNormal):
        if r <= 0.0:
            return 0.0
        s = dist.sigma
        lr = math.log(r)
        p2 = (lr - dist.mu - s * s) / s
        p3 = (lr - dist.mu) / s
        v = r * float(_sp.ndtr(p3)) - dist.mean * float(_sp.ndtr(p2))
        return max(v, 0.0)

    if isinstance(dist, Exponential):
        if r <= 0.0:
            return 0.0
        b = dist.beta
        v = r - (-math.expm1(-b * r)) / b
        return max(v, 0.0)

    raise TypeError(f"unsupported distribution type: {type(dist).__name__}")


def loss2(dist: Distribution, r: float) -> float:
    """Second-order shortage beyond r.

    E[(X-r)+ (X-r-1)+] / 2 when the family is discrete, the integral of
    (x-r)^2 f(x) / 2 over x > r when it is continuous.
    """
    r = _validate_r(dist, r)

    if isinstance(dist, NegativeBinomial):
        n, p = dist.n, dist.p
        m = n * p / (1.0 - p)
        m1 = (n + 1.0) * p / (1.0 - p)
        s1 = NegativeBinomial(n + 1.0, p)
        s2 = NegativeBinomial(n + 2.0, p)
        v = (0.5 * (r * r + r) * dist.survival(r - 1)
             - r * m * s1.survival(r - 2)
             + 0.5 * m * m1 * s2.survival(r - 3))
        return max(v, 0.0)

    if isinstance(dist, Geometric):
        p = dist.p
        return math.exp((r + 1.0) * math.log1p(-p)) / (p * p)

    if isinstance(dist, Logarithmic):
        mo = dist.moments()
        if r < 1.0:
            # E[X(X-1)]/2 at and below the support start
            return 0.5 * (mo.variance + mo.mean * mo.mean - mo.mean)
        p = dist.p
        b = -1.0 / math.log1p(-p)
        q = 1.0 - p
        pr = math.exp(r * math.log(p))
        v = (0.5 * (r * r + r) * dist.survival(r - 1)
             - b * (2.0 * r + 1.0) * pr / (2.0 * q)
             + b * pr * (r - p * (r - 1.0)) / (2.0 * q * q))
        return max(v, 0.0)

    if isinstance(dist, Poisson):
        lam = dist.lam
        d = r - lam
        v = 0.5 * ((d * d + r) * dist.survival(r) - lam * d * dist.density(r))
        return max(v, 0.0)

    if isinstance(dist, Normal):
        mu, s = dist.mu, dist.sigma
        z = (r - mu) / s
        d = r - mu
        v = 0.5 * (d * d + s * s) * float(_sp.ndtr(-z)) - 0.5 * s * d * _phi(z)
        return max(v, 0.0)

    if isinstance(dist, Gamma):
        a, b = dist.alpha, dist.beta
        s1 = Gamma(a + 1.0, b)
        s2 = Gamma(a + 2.0, b)
        v = (0.5 * r * r * dist.survival(r)
             - r * (a / b) * s1.survival(r)
             + 0.5 * (a * (a + 1.0) / (b * b)) * s2.survival(r))
        return max(v, 0.0)

    if isinstance(dist, LogNormal):
        mu, s = dist.mu, dist.sigma
        m = dist.mean
        e2 = math.exp(2.0 * mu + 2.0 * s * s)
        if r <= 0.0:
            return 0.5 * (r * r - 2.0 * r * m + e2)
        lr = math.log(r)
        p1 = (lr - mu - 2.0 * s * s) / s
        p2 = (lr - mu - s * s) / s
        p3 = (lr - mu) / s
        v = (0.5 * r * r * float(_sp.ndtr(-p3))
             - r * m * float(_sp.ndtr(-p2))
             + 0.5 * e2 * float(_sp.ndtr(-p1)))
        return max(v, 0.0)

    if isinstance(dist, Exponential):
        b = dist.beta
        if r < 0.0:
            return 1.0 / (b * b) - r / b + 0.5 * r * r
        return math.exp(-b * r) / (b * b)

    raise TypeError(f"unsupported distribution type: {type(dist).__name__}")


def limited_expected_value(dist: Distribution, r: float) -> float:
    """E[min(X, r)], the expected demand served from a stock of r."""
    r = _validate_r(dist, r)
    return dist.mean - loss1(dist, r)


_DISPATCH = {
    LossKind.FIRST_ORDER: loss1,
    LossKind.COMPLEMENTARY: loss_c,
    LossKind.SECOND_ORDER: loss2,
    LossKind.LIMITED_EXPECTED_VALUE: limited_expected_value,
}


def evaluate_loss(kind: LossKind | str, dist: Distribution, r: float) -> float:
    """Evaluate one of the four operations by kind."""
    if isinstance(kind, str):
        try:
            kind = LossKind(kind)
        except ValueError:
            names = ", ".join(k.value for k in LossKind)
            raise DomainError(f"unknown loss kind {kind!r}; expected one of: {names}") from None
    return _DISPATCH[kind](dist, r)
