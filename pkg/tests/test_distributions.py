"""Distribution primitives: construction, density/cdf/survival consistency, moments."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invloss import (
    GRID,
    DomainError,
    Exponential,
    Gamma,
    Geometric,
    LogNormal,
    Logarithmic,
    Moments,
    NegativeBinomial,
    Normal,
    ParameterError,
    Poisson,
    adaptive_simpson,
    canonical_family,
    quantile,
)

ALL_DISTS = [d for dists in GRID.values() for d in dists]
DISCRETE = [d for d in ALL_DISTS if d.discrete]
CONTINUOUS = [d for d in ALL_DISTS if not d.discrete]


def _id(d):
    return f"{d.family}{tuple(d.params().values())}"


class TestConstruction:
    @pytest.mark.parametrize(
        "ctor",
        [
            lambda: Poisson(0.0),
            lambda: Poisson(-1.0),
            lambda: Geometric(0.0),
            lambda: Geometric(1.0),
            lambda: Geometric(1.5),
            lambda: Logarithmic(0.0),
            lambda: Logarithmic(1.0),
            lambda: NegativeBinomial(0.0, 0.5),
            lambda: NegativeBinomial(2.0, 0.0),
            lambda: NegativeBinomial(2.0, 1.0),
            lambda: Normal(0.0, 0.0),
            lambda: Normal(0.0, -1.0),
            lambda: Normal(math.nan, 1.0),
            lambda: Gamma(0.0, 1.0),
            lambda: Gamma(1.0, 0.0),
            lambda: LogNormal(0.0, 0.0),
            lambda: Exponential(0.0),
            lambda: Exponential(math.inf),
        ],
    )
    def test_invalid_parameters_rejected(self, ctor):
        with pytest.raises(ParameterError):
            ctor()

    def test_parameters_coerced_to_float(self):
        d = Poisson(3)
        assert isinstance(d.lam, float)
        assert NegativeBinomial(2, 0.5).n == 2.0

    def test_params_mapping(self):
        assert Poisson(2.5).params() == {"lambda": 2.5}
        assert Gamma(2.0, 0.5).params() == {"alpha": 2.0, "beta": 0.5}

    def test_canonical_family_aliases(self):
        assert canonical_family("LogNormal") == "log_normal"
        assert canonical_family("negbin") == "negative_binomial"
        assert canonical_family(" Negative-Binomial ") == "negative_binomial"
        with pytest.raises(DomainError):
            canonical_family("weibull")

    def test_moments_validation(self):
        with pytest.raises(ParameterError):
            Moments(math.nan, 1.0)
        with pytest.raises(ParameterError):
            Moments(1.0, -0.5)


class TestFrozenValues:
    def test_density(self):
        assert Normal(0, 1).density(0.0) == 0.3989422804014327
        assert Poisson(1).density(0) == 0.36787944117144233
        assert Geometric(0.5).density(1) == 0.5
        assert NegativeBinomial(2, 0.5).density(0) == 0.25

    def test_cdf(self):
        assert Exponential(1).cdf(math.log(2)) == pytest.approx(0.5, abs=1e-15)
        assert Geometric(0.5).cdf(0) == 0.0
        assert NegativeBinomial(2, 0.5).cdf(1) == pytest.approx(0.5, abs=1e-15)

    def test_survival(self):
        # 1 - e^-2 (1 + 2 + 2) by direct summation
        assert Poisson(2).survival(2) == pytest.approx(0.32332358381693654, rel=1e-14)

    def test_moments(self):
        g = Geometric(0.5).moments()
        assert (g.mean, g.variance) == (2.0, 2.0)
        nb = NegativeBinomial(2, 0.5).moments()
        assert (nb.mean, nb.variance) == (2.0, 4.0)
        lg = Logarithmic(0.5).moments()
        assert lg.mean == pytest.approx(1 / math.log(2), rel=1e-15)
        assert lg.variance == pytest.approx(0.804021100772319, rel=1e-14)


class TestDiscreteConsistency:
    @pytest.mark.parametrize("d", DISCRETE, ids=_id)
    def test_density_sums_to_one(self, d):
        total, k = 0.0, int(d.support_min)
        while total < 1 - 1e-13:
            total += d.density(k)
            k += 1
            assert k < 100_000
        assert 1 - 1e-12 <= total <= 1 + 1e-12

    @pytest.mark.parametrize("d", DISCRETE, ids=_id)
    def test_cdf_increments_match_density(self, d):
        lo = int(d.support_min)
        for k in range(lo, lo + 40):
            inc = d.cdf(k) - d.cdf(k - 1)
            assert inc == pytest.approx(d.density(k), abs=1e-12)

    @pytest.mark.parametrize("d", DISCRETE, ids=_id)
    def test_cdf_flat_between_integers(self, d):
        assert d.cdf(3.7) == d.cdf(3)
        assert d.cdf(d.support_min - 0.5) == 0.0

    def test_density_rejects_non_integer(self):
        with pytest.raises(DomainError):
            Poisson(2).density(1.5)

    def test_density_zero_below_support(self):
        assert Poisson(2).density(-1) == 0.0
        assert Geometric(0.5).density(0) == 0.0
        assert Logarithmic(0.5).density(0) == 0.0


class TestContinuousConsistency:
    @pytest.mark.parametrize("d", CONTINUOUS, ids=_id)
    def test_density_quadrature_matches_cdf(self, d):
        a = quantile(d, 1e-13) if d.support_min == -math.inf else d.support_min
        b = quantile(d, 1 - 1e-13)
        if d.family == "gamma" and d.alpha < 1:
            # the origin singularity defeats plain Simpson; start clear of it
            a = quantile(d, 0.05)
        val, _ = adaptive_simpson(d.density, a, b, 1e-11)
        assert val == pytest.approx(d.cdf(b) - d.cdf(a), abs=1e-9)

    @pytest.mark.parametrize("d", CONTINUOUS, ids=_id)
    def test_cdf_zero_below_support(self, d):
        if d.support_min > -math.inf:
            assert d.cdf(d.support_min - 1.0) == 0.0
            assert d.density(d.support_min - 1.0) == 0.0


@pytest.mark.parametrize("d", ALL_DISTS, ids=_id)
def test_survival_complements_cdf(d):
    for p in (0.05, 0.25, 0.5, 0.75, 0.95):
        x = quantile(d, p)
        assert d.cdf(x) + d.survival(x) == pytest.approx(1.0, abs=5e-15)


@pytest.mark.parametrize("d", ALL_DISTS, ids=_id)
def test_moments_match_summation_or_quadrature(d):
    m = d.moments()
    if d.discrete:
        mean = var = mass = 0.0
        k = int(d.support_min)
        while mass < 1 - 1e-14:
            f = d.density(k)
            mass += f
            mean += k * f
            var += k * k * f
            k += 1
            assert k < 200_000
        var -= mean * mean
    else:
        a = quantile(d, 1e-14) if d.support_min == -math.inf else d.support_min
        b = quantile(d, 1 - 1e-14)
        if d.family == "gamma" and d.alpha < 1:
            a = quantile(d, 1e-14)
        mean, _ = adaptive_simpson(lambda x: x * d.density(x), a, b, 1e-10)
        ex2, _ = adaptive_simpson(lambda x: x * x * d.density(x), a, b, 1e-10)
        var = ex2 - mean * mean
    assert mean == pytest.approx(m.mean, rel=1e-7, abs=1e-9)
    assert var == pytest.approx(m.variance, rel=1e-7, abs=1e-7)


class TestCdfProperties:
    @given(
        p=st.floats(0.01, 0.99),
        xs=st.lists(st.integers(0, 60), min_size=2, max_size=6),
    )
    @settings(max_examples=60, deadline=None)
    def test_geometric_cdf_monotone_and_bounded(self, p, xs):
        d = Geometric(p)
        for x in xs:
            assert 0.0 <= d.cdf(x) <= 1.0
        xs = sorted(xs)
        for lo, hi in zip(xs, xs[1:]):
            assert d.cdf(lo) <= d.cdf(hi) + 1e-15

    @given(
        mu=st.floats(-5, 5),
        sigma=st.floats(0.1, 5),
        a=st.floats(-20, 20),
        b=st.floats(-20, 20),
    )
    @settings(max_examples=60, deadline=None)
    def test_normal_cdf_monotone(self, mu, sigma, a, b):
        d = Normal(mu, sigma)
        lo, hi = min(a, b), max(a, b)
        assert d.cdf(lo) <= d.cdf(hi) + 1e-15
        assert 0.0 <= d.cdf(lo) and d.cdf(hi) <= 1.0
