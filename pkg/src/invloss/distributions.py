"""The eight demand distributions: probability functions, moments, fitting.

Each distribution is an immutable value object. Construction validates the
parameter constraints; every operation is a pure function of the instance
and its arguments, so values can be shared freely between threads.

Survival probabilities are computed through complemented special-function
forms (never as 1 - cdf) wherever the underlying function offers one, so
deep tails keep full relative accuracy.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from enum import Enum

from scipy import special as _sp

from .errors import DomainError, InfeasibleMomentsError, ParameterError
from .lambertw import BRANCH_POINT, lambert_w_neg1

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class Moments:
    """A mean/variance pair, the currency of fitting and model choice."""

    mean: float
    variance: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "variance", float(self.variance))
        if not math.isfinite(self.mean):
            raise ParameterError(f"mean must be finite, got {self.mean!r}")
        if not (self.variance >= 0.0 and math.isfinite(self.variance)):
            raise ParameterError(f"variance must be finite and >= 0, got {self.variance!r}")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)


def _as_float(obj, *names) -> None:
    for name in names:
        object.__setattr__(obj, name, float(getattr(obj, name)))


def _integer_point(x) -> int:
    """Discrete supports live on the integers; reject anything else."""
    xf = float(x)
    if not (math.isfinite(xf) and xf == math.floor(xf)):
        raise DomainError(f"discrete distributions take integer arguments, got x={x!r}")
    return int(xf)


class Distribution(ABC):
    """Shared surface of the eight demand models."""

    family: str = ""
    discrete: bool = False

    @property
    @abstractmethod
    def support_min(self) -> float:
        """Smallest point of the support (-inf for the normal)."""

    @abstractmethod
    def density(self, x: float) -> float:
        """Probability mass (discrete) or density (continuous) at x.

        Zero outside the support. Discrete families require integer x.
        """

    @abstractmethod
    def cdf(self, x: float) -> float:
        """P(X <= x); exactly 0.0 below the support minimum.

        Discrete families evaluate at floor(x) for non-integer x.
        """

    @abstractmethod
    def survival(self, x: float) -> float:
        """P(X > x), in complemented form where one exists."""

    @abstractmethod
    def moments(self) -> Moments:
        """Exact mean and variance from the closed forms."""

    def params(self) -> dict[str, float]:
        """Parameter values keyed by their conventional symbols."""
        return {_PARAM_SYMBOLS.get((type(self), f.name), f.name): getattr(self, f.name)
                for f in fields(self)}

    @property
    def mean(self) -> float:
        return self.moments().mean

    @property
    def variance(self) -> float:
        return self.moments().variance


@dataclass(frozen=True)
class NegativeBinomial(Distribution):
    """Counts on {0,1,...} with pmf C(x+n-1, n-1) (1-p)^n p^x.

    The shape n may be any positive real; the binomial coefficient is read
    through the gamma function. Mean n p/(1-p), variance n p/(1-p)^2.
    """

    n: float
    p: float
    family = "negative_binomial"
    discrete = True

    def __post_init__(self) -> None:
        _as_float(self, "n", "p")
        _require(self.n > 0.0 and math.isfinite(self.n), f"n must be a positive real, got {self.n!r}")
        _require(0.0 < self.p < 1.0, f"p must lie strictly between 0 and 1, got {self.p!r}")

    @property
    def support_min(self) -> float:
        return 0.0

    def density(self, x: float) -> float:
        k = _integer_point(x)
        if k < 0:
            return 0.0
        log_pmf = (math.lgamma(k + self.n) - math.lgamma(self.n) - math.lgamma(k + 1.0)
                   + self.n * math.log1p(-self.p) + k * math.log(self.p))
        return math.exp(log_pmf)

    def cdf(self, x: float) -> float:
        k = math.floor(x)
        if k < 0:
            return 0.0
        return float(_sp.betainc(self.n, k + 1.0, 1.0 - self.p))

    def survival(self, x: float) -> float:
        k = math.floor(x)
        if k < 0:
            return 1.0
        # I_p(k+1, n) is the complement of I_{1-p}(n, k+1)
        return float(_sp.betainc(k + 1.0, self.n, self.p))

    def moments(self) -> Moments:
        q = 1.0 - self.p
        return Moments(self.n * self.p / q, self.n * self.p / (q * q))


@dataclass(frozen=True)
class Geometric(Distribution):
    """Trials-until-first-success counts on {1,2,...}: pmf (1-p)^(x-1) p."""

    p: float
    family = "geometric"
    discrete = True

    def __post_init__(self) -> None:
        _as_float(self, "p")
        _require(0.0 < self.p < 1.0, f"p must lie strictly between 0 and 1, got {self.p!r}")

    @property
    def support_min(self) -> float:
        return 1.0

    def density(self, x: float) -> float:
        k = _integer_point(x)
        if k < 1:
            return 0.0
        return self.p * math.exp((k - 1.0) * math.log1p(-self.p))

    def cdf(self, x: float) -> float:
        k = math.floor(x)
        if k < 1:
            return 0.0
        return -math.expm1(k * math.log1p(-self.p))

    def survival(self, x: float) -> float:
        k = math.floor(x)
        if k < 1:
            return 1.0
        return math.exp(k * math.log1p(-self.p))

    def moments(self) -> Moments:
        return Moments(1.0 / self.p, (1.0 - self.p) / (self.p * self.p))


@dataclass(frozen=True)
class Logarithmic(Distribution):
    """Logarithmic-series counts on {1,2,...}: pmf -p^x / (x ln(1-p)).

    No special function gives its cdf, so partial sums are used; the terms
    are positive and geometrically decaying, which keeps them exact to
    rounding and fast on any argument the package meets.
    """

    p: float
    family = "logarithmic"
    discrete = True

    def __post_init__(self) -> None:
        _as_float(self, "p")
        _require(0.0 < self.p < 1.0, f"p must lie strictly between 0 and 1, got {self.p!r}")

    @property
    def support_min(self) -> float:
        return 1.0

    @property
    def _beta(self) -> float:
        return -1.0 / math.log1p(-self.p)

    def density(self, x: float) -> float:
        k = _integer_point(x)
        if k < 1:
            return 0.0
        return self._beta * math.exp(k * math.log(self.p)) / k

    def cdf(self, x: float) -> float:
        k = math.floor(x)
        if k < 1:
            return 0.0
        b = self._beta
        total = 0.0
        pj = 1.0
        for j in range(1, int(k) + 1):
            pj *= self.p
            term = b * pj / j
            total += term
            if term < 1e-18 * total:
                break
        return min(total, 1.0)

    def survival(self, x: float) -> float:
        k = math.floor(x)
        if k < 1:
            return 1.0
        b = self._beta
        total = 0.0
        j = int(k) + 1
        pj = math.exp(j * math.log(self.p))
        while True:
            term = b * pj / j
            total += term
            # remaining tail < term * p/(1-p) * 1, monotone terms
            if term <= 1e-18 * total or term < 5e-324:
                break
            pj *= self.p
            j += 1
        return total

    def moments(self) -> Moments:
        el = math.log1p(-self.p)
        q = 1.0 - self.p
        mean = -self.p / (q * el)
        var = -self.p * (el + self.p) / (q * q * el * el)
        return Moments(mean, var)


@dataclass(frozen=True)
class Poisson(Distribution):
    """Poisson counts on {0,1,...} with rate lam > 0; mean = variance = lam."""

    lam: float
    family = "poisson"
    discrete = True

    def __post_init__(self) -> None:
        _as_float(self, "lam")
        _require(self.lam > 0.0 and math.isfinite(self.lam),
                 f"lambda must be a positive real, got {self.lam!r}")

    @property
    def support_min(self) -> float:
        return 0.0

    def density(self, x: float) -> float:
        k = _integer_point(x)
        if k < 0:
            return 0.0
        return math.exp(k * math.log(self.lam) - self.lam - math.lgamma(k + 1.0))

    def cdf(self, x: float) -> float:
        k = math.floor(x)
        if k < 0:
            return 0.0
        return float(_sp.gammaincc(k + 1.0, self.lam))

    def survival(self, x: float) -> float:
        k = math.floor(x)
        if k < 0:
            return 1.0
        return float(_sp.gammainc(k + 1.0, self.lam))

    def moments(self) -> Moments:
        return Moments(self.lam, self.lam)


@dataclass(frozen=True)
class Normal(Distribution):
    """Gaussian demand on the whole real line; mu real, sigma > 0."""

    mu: float
    sigma: float
    family = "normal"

    def __post_init__(self) -> None:
        _as_float(self, "mu", "sigma")
        _require(math.isfinite(self.mu), f"mu must be finite, got {self.mu!r}")
        _require(self.sigma > 0.0 and math.isfinite(self.sigma),
                 f"sigma must be a positive real, got {self.sigma!r}")

    @property
    def support_min(self) -> float:
        return -math.inf

    def density(self, x: float) -> float:
        z = (float(x) - self.mu) / self.sigma
        return math.exp(-0.5 * z * z) / (self.sigma * _SQRT_2PI)

    def cdf(self, x: float) -> float:
        return float(_sp.ndtr((float(x) - self.mu) / self.sigma))

    def survival(self, x: float) -> float:
        return float(_sp.ndtr(-(float(x) - self.mu) / self.sigma))

    def moments(self) -> Moments:
        return Moments(self.mu, self.sigma * self.sigma)


@dataclass(frozen=True)
class Gamma(Distribution):
    """Gamma demand on [0, inf) with shape alpha and rate beta (not scale)."""

    alpha: float
    beta: float
    family = "gamma"

    def __post_init__(self) -> None:
        _as_float(self, "alpha", "beta")
        _require(self.alpha > 0.0 and math.isfinite(self.alpha),
                 f"alpha must be a positive real, got {self.alpha!r}")
        _require(self.beta > 0.0 and math.isfinite(self.beta),
                 f"beta must be a positive real, got {self.beta!r}")

    @property
    def support_min(self) -> float:
        return 0.0

    def density(self, x: float) -> float:
        x = float(x)
        if x < 0.0:
            return 0.0
        if x == 0.0:
            if self.alpha > 1.0:
                return 0.0
            if self.alpha == 1.0:
                return self.beta
            return math.inf
        return math.exp(self.alpha * math.log(self.beta) + (self.alpha - 1.0) * math.log(x)
                        - self.beta * x - math.lgamma(self.alpha))

    def cdf(self, x: float) -> float:
        x = float(x)
        if x <= 0.0:
            return 0.0
        return float(_sp.gammainc(self.alpha, self.beta * x))

    def survival(self, x: float) -> float:
        x = float(x)
        if x <= 0.0:
            return 1.0
        return float(_sp.gammaincc(self.alpha, self.beta * x))

    def moments(self) -> Moments:
        return Moments(self.alpha / self.beta, self.alpha / (self.beta * self.beta))


@dataclass(frozen=True)
class LogNormal(Distribution):
    """exp(Normal(mu, sigma)) demand on (0, inf)."""

    mu: float
    sigma: float
    family = "log_normal"

    def __post_init__(self) -> None:
        _as_float(self, "mu", "sigma")
        _require(math.isfinite(self.mu), f"mu must be finite, got {self.mu!r}")
        _require(self.sigma > 0.0 and math.isfinite(self.sigma),
                 f"sigma must be a positive real, got {self.sigma!r}")

    @property
    def support_min(self) -> float:
        return 0.0

    def density(self, x: float) -> float:
        x = float(x)
        if x <= 0.0:
            return 0.0
        z = (math.log(x) - self.mu) / self.sigma
        return math.exp(-0.5 * z * z) / (x * self.sigma * _SQRT_2PI)

    def cdf(self, x: float) -> float:
        x = float(x)
        if x <= 0.0:
            return 0.0
        return float(_sp.ndtr((math.log(x) - self.mu) / self.sigma))

    def survival(self, x: float) -> float:
        x = float(x)
        if x <= 0.0:
            return 1.0
        return float(_sp.ndtr(-(math.log(x) - self.mu) / self.sigma))

    def moments(self) -> Moments:
        s2 = self.sigma * self.sigma
        m = math.exp(self.mu + 0.5 * s2)
        return Moments(m, math.expm1(s2) * m * m)


@dataclass(frozen=True)
class Exponential(Distribution):
    """Exponential demand on [0, inf) with rate beta; mean 1/beta."""

    beta: float
    family = "exponential"

    def __post_init__(self) -> None:
        _as_float(self, "beta")
        _require(self.beta > 0.0 and math.isfinite(self.beta),
                 f"beta must be a positive real, got {self.beta!r}")

    @property
    def support_min(self) -> float:
        return 0.0

    def density(self, x: float) -> float:
        x = float(x)
        if x < 0.0:
            return 0.0
        return self.beta * math.exp(-self.beta * x)

    def cdf(self, x: float) -> float:
        x = float(x)
        if x <= 0.0:
            return 0.0
        return -math.expm1(-self.beta * x)

    def survival(self, x: float) -> float:
        x = float(x)
        if x <= 0.0:
            return 1.0
        return math.exp(-self.beta * x)

    def moments(self) -> Moments:
        return Moments(1.0 / self.beta, 1.0 / (self.beta * self.beta))


_PARAM_SYMBOLS = {(Poisson, "lam"): "lambda"}

FAMILIES: dict[str, type[Distribution]] = {
    "negative_binomial": NegativeBinomial,
    "geometric": Geometric,
    "logarithmic": Logarithmic,
    "poisson": Poisson,
    "normal": Normal,
    "gamma": Gamma,
    "log_normal": LogNormal,
    "exponential": Exponential,
}

_FAMILY_ALIASES = {"lognormal": "log_normal", "negbin": "negative_binomial"}


def canonical_family(name: str) -> str:
    """Normalize a family name; raise DomainError for an unknown one."""
    key = str(name).strip().lower().replace("-", "_")
    key = _FAMILY_ALIASES.get(key, key)
    if key not in FAMILIES:
        known = ", ".join(sorted(FAMILIES))
        raise DomainError(f"unknown distribution family {name!r}; expected one of: {known}")
    return key


class DispersionRecommendation(Enum):
    """Discrete model suggested by the coefficient of dispersion."""

    POISSON = "poisson"
    NEGATIVE_BINOMIAL = "negative_binomial"
    UNDERDISPERSED = "underdispersed"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class DispersionClass:
    """Coefficient of dispersion together with the model it points at."""

    cd: float
    recommendation: DispersionRecommendation


def classify_dispersion(m: Moments) -> DispersionClass:
    """Classify variance-to-mean ratio: Poisson-like within [0.9, 1.1],
    negative binomial above, underdispersed below. Requires mean > 0."""
    if not m.mean > 0.0:
        raise DomainError(f"coefficient of dispersion requires mean > 0, got mean={m.mean!r}")
    cd = m.variance / m.mean
    if cd > 1.1:
        rec = DispersionRecommendation.NEGATIVE_BINOMIAL
    elif cd >= 0.9:
        rec = DispersionRecommendation.POISSON
    else:
        rec = DispersionRecommendation.UNDERDISPERSED
    return DispersionClass(cd, rec)


def logarithmic_mean(p: float) -> float:
    """Mean of Logarithmic(p) without constructing the instance."""
    el = math.log1p(-p)
    return -p / ((1.0 - p) * el)


def fit_logarithmic_bisection(mean: float) -> Logarithmic:
    """Reference route for the logarithmic fit: bisect the mean equation.

    Slow but assumption-free; the closed-form route must agree with it.
    """
    mean = float(mean)
    if not mean > 1.0:
        raise InfeasibleMomentsError(
            f"logarithmic fit requires mean > 1 (support starts at 1), got {mean!r}")
    lo, hi = 5e-324, 1.0 - 1e-16
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if logarithmic_mean(mid) < mean:
            lo = mid
        else:
            hi = mid
    return Logarithmic(0.5 * (lo + hi))


def _fit_negative_binomial(m: Moments) -> NegativeBinomial:
    if not m.mean > 0.0:
        raise InfeasibleMomentsError(f"negative binomial fit requires mean > 0, got {m.mean!r}")
    if not m.variance > m.mean:
        raise InfeasibleMomentsError(
            f"negative binomial fit requires variance > mean, got mean={m.mean!r}, "
            f"variance={m.variance!r}")
    p = 1.0 - m.mean / m.variance
    n = m.mean * m.mean / (m.variance - m.mean)
    return NegativeBinomial(n, p)


def _fit_geometric(m: Moments) -> Geometric:
    if not m.mean > 1.0:
        raise InfeasibleMomentsError(
            f"geometric fit requires mean > 1 (support starts at 1), got {m.mean!r}")
    return Geometric(1.0 / m.mean)


def _fit_logarithmic(m: Moments) -> Logarithmic:
    mean = m.mean
    if not mean > 1.0:
        raise InfeasibleMomentsError(
            f"logarithmic fit requires mean > 1 (support starts at 1), got {mean!r}")
    arg = -1.0 / (mean * math.exp(1.0 / mean))
    if arg < BRANCH_POINT:
        # the exact argument is > -1/e for mean > 1; only rounding can dip below
        arg = BRANCH_POINT
    w = lambert_w_neg1(arg)
    p = -math.expm1(w + 1.0 / mean)
    if not (0.0 < p < 1.0) or abs(logarithmic_mean(p) - mean) > 1e-9 * mean:
        # precision guard near p -> 0 or p -> 1: fall back to the mean equation
        return fit_logarithmic_bisection(mean)
    return Logarithmic(p)


def _fit_poisson(m: Moments) -> Poisson:
    if not m.mean > 0.0:
        raise InfeasibleMomentsError(f"poisson fit requires mean > 0, got {m.mean!r}")
    return Poisson(m.mean)


def _fit_normal(m: Moments) -> Normal:
    if not m.variance > 0.0:
        raise InfeasibleMomentsError(f"normal fit requires variance > 0, got {m.variance!r}")
    return Normal(m.mean, math.sqrt(m.variance))


def _fit_gamma(m: Moments) -> Gamma:
    if not m.mean > 0.0:
        raise InfeasibleMomentsError(f"gamma fit requires mean > 0, got {m.mean!r}")
    if not m.variance > 0.0:
        raise InfeasibleMomentsError(f"gamma fit requires variance > 0, got {m.variance!r}")
    return Gamma(m.mean * m.mean / m.variance, m.mean / m.variance)


def _fit_log_normal(m: Moments) -> LogNormal:
    if not m.mean > 0.0:
        raise InfeasibleMomentsError(f"log-normal fit requires mean > 0, got {m.mean!r}")
    if not m.variance > 0.0:
        raise InfeasibleMomentsError(f"log-normal fit requires variance > 0, got {m.variance!r}")
    s2 = math.log1p(m.variance / (m.mean * m.mean))
    mu = math.log(m.mean) - 0.5 * s2
    return LogNormal(mu, math.sqrt(s2))


def _fit_exponential(m: Moments) -> Exponential:
    if not m.mean > 0.0:
        raise InfeasibleMomentsError(f"exponential fit requires mean > 0, got {m.mean!r}")
    return Exponential(1.0 / m.mean)


_FITTERS = {
    "negative_binomial": _fit_negative_binomial,
    "geometric": _fit_geometric,
    "logarithmic": _fit_logarithmic,
    "poisson": _fit_poisson,
    "normal": _fit_normal,
    "gamma": _fit_gamma,
    "log_normal": _fit_log_normal,
    "exponential": _fit_exponential,
}

# one free parameter: only the mean is matched, the variance is ignored
ONE_PARAMETER_FAMILIES = frozenset({"geometric", "logarithmic", "poisson", "exponential"})


def fit_from_moments(family: str, m: Moments) -> Distribution:
    """Method-of-moments fit of the named family to the given moments.

    Two-parameter families match mean and variance exactly; one-parameter
    families match the mean and ignore the variance. Infeasible targets
    raise InfeasibleMomentsError naming the violated requirement.
    """
    return _FITTERS[canonical_family(family)](m)
