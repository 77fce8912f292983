"""Reorder-point / order-quantity service measures."""

import math

import pytest

from invloss import (
    DomainError,
    Exponential,
    Gamma,
    Geometric,
    Normal,
    ParameterError,
    Poisson,
    PolicyParams,
    evaluate_policy,
    min_reorder_point,
)


class TestParams:
    def test_coercion(self):
        p = PolicyParams(1, 2)
        assert (p.r, p.q) == (1.0, 2.0)

    @pytest.mark.parametrize(
        "r,q", [(math.nan, 1.0), (math.inf, 1.0), (0.0, 0.0), (0.0, -1.0), (0.0, math.nan)]
    )
    def test_rejected(self, r, q):
        with pytest.raises(ParameterError):
            PolicyParams(r, q)


class TestFrozenValues:
    def test_exponential_unit_policy(self):
        m = evaluate_policy(Exponential(1), PolicyParams(0, 1))
        assert m.stockout_frequency == pytest.approx(
            0.6321205588285577, rel=1e-14
        )
        assert m.expected_backorders == pytest.approx(
            0.6321205588285577, rel=1e-14
        )

    def test_exponential_backorders(self):
        m = evaluate_policy(Exponential(1), PolicyParams(1, 2))
        # (e^-1 - e^-3) / 2
        assert m.expected_backorders == pytest.approx(0.1590461864017892, rel=1e-14)

    def test_high_reorder_point_is_quiet(self):
        m = evaluate_policy(Normal(100, 10), PolicyParams(200, 10))
        assert 0.0 <= m.stockout_frequency <= 1e-20
        assert 0.0 <= m.expected_backorders <= 1e-18

    def test_low_reorder_point_saturates(self):
        m = evaluate_policy(Normal(0, 1), PolicyParams(-100, 1))
        assert m.stockout_frequency == 1.0


class TestDiscreteDomain:
    def test_non_integer_r(self):
        with pytest.raises(DomainError, match="integer r >= 0"):
            evaluate_policy(Poisson(3), PolicyParams(2.5, 1))

    def test_negative_r(self):
        with pytest.raises(DomainError, match="integer r >= 0"):
            evaluate_policy(Poisson(3), PolicyParams(-1, 1))

    def test_non_integer_q(self):
        with pytest.raises(DomainError, match="integer Q >= 1"):
            evaluate_policy(Poisson(3), PolicyParams(2, 0.5))

    def test_integer_valued_floats_accepted(self):
        m = evaluate_policy(Geometric(0.5), PolicyParams(2.0, 3.0))
        assert 0.0 <= m.stockout_frequency <= 1.0


@pytest.mark.parametrize(
    "dist,rs,q",
    [
        (Exponential(0.5), [0.0, 0.5, 1.0, 2.0, 4.0, 8.0], 1.5),
        (Normal(10, 2), [4.0, 7.0, 10.0, 13.0, 16.0], 3.0),
        (Gamma(2, 0.5), [0.0, 1.0, 2.0, 4.0, 8.0], 2.0),
        (Poisson(5), list(range(0, 14)), 2),
        (Geometric(0.3), list(range(0, 12)), 1),
    ],
)
def test_measures_decrease_in_reorder_point(dist, rs, q):
    freqs = [evaluate_policy(dist, PolicyParams(r, q)).stockout_frequency for r in rs]
    backs = [evaluate_policy(dist, PolicyParams(r, q)).expected_backorders for r in rs]
    for a, b in zip(freqs, freqs[1:]):
        assert b <= a + 1e-12
    for a, b in zip(backs, backs[1:]):
        assert b <= a + 1e-12
    for f in freqs:
        assert 0.0 <= f <= 1.0
    for b in backs:
        assert b >= 0.0


class TestMinReorderPoint:
    def test_exponential_hits_exact_boundary(self):
        target = 0.6321205588285577  # stockout frequency at r = 0, Q = 1
        r = min_reorder_point(Exponential(1), 1.0, target)
        assert r == pytest.approx(0.0, abs=1e-6)

    def test_poisson_loose_target(self):
        assert min_reorder_point(Poisson(3), 1, 0.999999) == 0.0

    def test_normal_service_level(self):
        d = Normal(100, 10)
        r = min_reorder_point(d, 50.0, 0.05)
        freq = evaluate_policy(d, PolicyParams(r, 50.0)).stockout_frequency
        assert freq <= 0.05
        below = evaluate_policy(d, PolicyParams(r - 1e-5, 50.0)).stockout_frequency
        assert below > 0.05

    @pytest.mark.parametrize(
        "dist,q,target",
        [
            (Poisson(3), 2, 0.3),
            (Poisson(10), 1, 0.05),
            (Geometric(0.4), 3, 0.1),
        ],
    )
    def test_discrete_minimality(self, dist, q, target):
        rm = min_reorder_point(dist, q, target)
        assert rm == int(rm) >= 0
        freq = evaluate_policy(dist, PolicyParams(rm, q)).stockout_frequency
        assert freq <= target
        if rm > 0:
            prev = evaluate_policy(dist, PolicyParams(rm - 1, q)).stockout_frequency
            assert prev > target

    @pytest.mark.parametrize(
        "dist,q,target",
        [
            (Exponential(2), 1.0, 0.2),
            (Gamma(2, 0.5), 2.0, 0.35),
            (Normal(0, 1), 1.0, 0.9),
        ],
    )
    def test_continuous_minimality(self, dist, q, target):
        rm = min_reorder_point(dist, q, target)
        freq = evaluate_policy(dist, PolicyParams(rm, q)).stockout_frequency
        assert freq <= target
        below = evaluate_policy(dist, PolicyParams(rm - 1e-5, q)).stockout_frequency
        assert below > target

    @pytest.mark.parametrize("target", [0.0, 1.0, -0.5, 1.5, math.nan])
    def test_target_domain(self, target):
        with pytest.raises(DomainError):
            min_reorder_point(Exponential(1), 1.0, target)
