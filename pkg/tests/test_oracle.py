"""Numerical reference engine: quadrature, series summation, derivative checks."""

import math

import pytest

from invloss import (
    ConvergenceError,
    DomainError,
    Exponential,
    Gamma,
    Geometric,
    LogNormal,
    Logarithmic,
    LossKind,
    NegativeBinomial,
    Normal,
    OracleConfig,
    OracleReport,
    Poisson,
    adaptive_simpson,
    discrete_losses,
    loss1,
    loss2,
    loss_c,
    numeric_derivative,
    numeric_integral_of_loss1,
    numeric_loss,
    quantile,
)


class TestAdaptiveSimpson:
    def test_polynomial_is_exact(self):
        val, err = adaptive_simpson(lambda x: x * x * x, 0.0, 2.0, 1e-12)
        assert val == pytest.approx(4.0, abs=1e-12)
        assert err <= 1e-12

    def test_empty_interval(self):
        assert adaptive_simpson(math.exp, 1.0, 1.0, 1e-10) == (0.0, 0.0)
        assert adaptive_simpson(math.exp, 2.0, 1.0, 1e-10) == (0.0, 0.0)

    def test_oscillatory(self):
        val, _ = adaptive_simpson(math.sin, 0.0, math.pi, 1e-11)
        assert val == pytest.approx(2.0, abs=1e-9)


class TestQuantile:
    def test_continuous_inverts_cdf(self):
        d = Normal(3, 2)
        for p in (0.01, 0.25, 0.5, 0.9, 0.999):
            assert d.cdf(quantile(d, p)) == pytest.approx(p, abs=1e-9)

    def test_discrete_is_minimal_integer(self):
        d = Poisson(4)
        for p in (0.1, 0.5, 0.95):
            k = quantile(d, p)
            assert k == int(k)
            assert d.cdf(k) >= p
            assert d.cdf(k - 1) < p

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, math.nan])
    def test_probability_domain(self, p):
        with pytest.raises(DomainError):
            quantile(Normal(0, 1), p)


class TestNumericLoss:
    def test_exponential_first_order(self):
        got = numeric_loss(LossKind.FIRST_ORDER, Exponential(2), 1.0)
        assert got == pytest.approx(math.exp(-2) / 2, rel=1e-10)

    def test_normal_complementary(self):
        got = numeric_loss("Lc", Normal(0, 1), 0.0)
        assert got == pytest.approx(0.3989422804014327, rel=1e-10)

    def test_poisson_second_order(self):
        assert numeric_loss("L2", Poisson(1), 0) == pytest.approx(0.5, abs=1e-12)

    def test_limited_expected_value(self):
        got = numeric_loss("Le", Exponential(1), math.log(2))
        assert got == pytest.approx(0.5, rel=1e-10)
        got = numeric_loss("Le", Normal(0, 1), 0.0)
        assert got == pytest.approx(-0.3989422804014327, rel=1e-10)

    def test_string_kind_dispatch(self):
        with pytest.raises(DomainError):
            numeric_loss("L9", Normal(0, 1), 0.0)

    @pytest.mark.parametrize(
        "dist,rs",
        [
            (Normal(0, 1), [-1.0, 0.0, 1.5]),
            (Exponential(1), [0.0, 0.5, 2.0]),
            (Gamma(0.5, 2), [0.1, 0.5]),
            (LogNormal(0, 1), [0.5, 2.0]),
            (Poisson(3), [0, 2, 5]),
            (Geometric(0.5), [0, 1, 4]),
            (NegativeBinomial(2, 0.5), [0, 3]),
            (Logarithmic(0.5), [0, 1, 3]),
        ],
    )
    def test_self_consistency(self, dist, rs):
        # the engine must satisfy L1 - Lc + r - E[X] = 0 on its own
        for r in rs:
            l1 = numeric_loss(LossKind.FIRST_ORDER, dist, r)
            lc = numeric_loss(LossKind.COMPLEMENTARY, dist, r)
            assert abs(l1 - lc + r - dist.mean) <= 1e-11

    def test_matches_analytic_spot_checks(self):
        cases = [
            (Gamma(20, 4), 6.0),
            (LogNormal(2, 1), 20.0),
            (Normal(-5, 0.5), -4.0),
            (NegativeBinomial(5, 0.7), 4),
        ]
        for d, r in cases:
            for kind, fn in [("L1", loss1), ("Lc", loss_c), ("L2", loss2)]:
                got = numeric_loss(kind, d, r)
                want = fn(d, r)
                assert got == pytest.approx(want, rel=1e-9, abs=1e-11)


class TestDiscreteBundle:
    def test_all_kinds_in_one_sweep(self):
        bundle = discrete_losses(Poisson(3), 2)
        assert set(bundle) == {
            LossKind.FIRST_ORDER,
            LossKind.COMPLEMENTARY,
            LossKind.SECOND_ORDER,
            LossKind.LIMITED_EXPECTED_VALUE,
        }
        assert bundle[LossKind.FIRST_ORDER] == pytest.approx(
            loss1(Poisson(3), 2), abs=1e-12
        )

    def test_continuous_rejected(self):
        with pytest.raises(DomainError):
            discrete_losses(Normal(0, 1), 1)

    def test_far_tail_is_negligible(self):
        bundle = discrete_losses(Poisson(3), 60)
        assert 0.0 <= bundle[LossKind.FIRST_ORDER] <= 1e-9

    def test_term_budget_enforced(self):
        cfg = OracleConfig(max_terms=10)
        with pytest.raises(ConvergenceError):
            discrete_losses(Geometric(0.01), 0, cfg)


class TestIntegralOfFirstOrderLoss:
    @pytest.mark.parametrize(
        "dist,r,want",
        [
            (Exponential(1), 0.0, 1.0),
            (Normal(0, 1), 0.0, 0.25),
            (Gamma(2, 1), 0.0, 3.0),
        ],
    )
    def test_known_values(self, dist, r, want):
        assert numeric_integral_of_loss1(dist, r) == pytest.approx(want, abs=1e-9)

    def test_matches_second_order_loss(self):
        d = LogNormal(0, 1)
        assert numeric_integral_of_loss1(d, 1.0) == pytest.approx(
            loss2(d, 1.0), abs=1e-8
        )

    def test_discrete_rejected(self):
        with pytest.raises(DomainError):
            numeric_integral_of_loss1(Poisson(2), 1)


class TestDerivative:
    def test_linear(self):
        assert numeric_derivative(lambda x: 3 * x + 1, 5.0) == pytest.approx(
            3.0, abs=1e-9
        )

    def test_quadratic(self):
        assert numeric_derivative(lambda x: x * x, 3.0) == pytest.approx(6.0, abs=1e-7)


class TestConfigAndReport:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"abs_tol": -1.0},
            {"abs_tol": 0.0},
            {"rel_tol": 0.0},
            {"tail_mass": -1e-9},
            {"max_terms": 0},
        ],
    )
    def test_config_validation(self, kwargs):
        from invloss import ParameterError

        with pytest.raises(ParameterError):
            OracleConfig(**kwargs)

    def test_report_pass_logic(self):
        r = OracleReport.compare(1.0, 1.0 + 1e-12, abs_tol=1e-10, rel_tol=0.0)
        assert r.passed
        assert r.abs_err == pytest.approx(1e-12, rel=1e-3)
        r = OracleReport.compare(1.0, 2.0, abs_tol=1e-10, rel_tol=1e-10)
        assert not r.passed
        r = OracleReport.compare(1e-20, 2e-20, abs_tol=1e-10, rel_tol=1e-12)
        assert r.passed  # tiny values pass on absolute grounds
