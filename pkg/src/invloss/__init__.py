"""Analytic loss functions for inventory control.

First-order, complementary, and second-order loss functions plus the
limited expected value, in closed form for eight demand distributions,
with a brute-force numeric oracle that verifies every expression and
(r,Q) policy measures built on top.
"""
from .distributions import (
    Distribution,
    Exponential,
    FAMILIES,
    Gamma,
    Geometric,
    Logarithmic,
    LogNormal,
    Moments,
    NegativeBinomial,
    Normal,
    Poisson,
    DispersionClass,
    DispersionRecommendation,
    canonical_family,
    classify_dispersion,
    fit_from_moments,
    fit_logarithmic_bisection,
)
from .errors import (
    ConvergenceError,
    DomainError,
    InfeasibleMomentsError,
    InvlossError,
    ParameterError,
)
from .lambertw import lambert_w_neg1
from .loss import LossKind, evaluate_loss, limited_expected_value, loss1, loss2, loss_c
from .oracle import (
    OracleConfig,
    OracleReport,
    adaptive_simpson,
    discrete_losses,
    numeric_derivative,
    numeric_integral_of_loss1,
    numeric_loss,
    quantile,
)
from .policy import PolicyMeasures, PolicyParams, evaluate_policy, min_reorder_point
from .verification import (
    GRID,
    expected_backorders_by_double_integral,
    r_grid,
    run_grid,
    stockout_frequency_by_integral,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DispersionClass",
    "DispersionRecommendation",
    "Distribution",
    "DomainError",
    "Exponential",
    "FAMILIES",
    "GRID",
    "Gamma",
    "Geometric",
    "InfeasibleMomentsError",
    "InvlossError",
    "Logarithmic",
    "LogNormal",
    "LossKind",
    "Moments",
    "NegativeBinomial",
    "Normal",
    "OracleConfig",
    "OracleReport",
    "ParameterError",
    "Poisson",
    "PolicyMeasures",
    "PolicyParams",
    "adaptive_simpson",
    "canonical_family",
    "classify_dispersion",
    "discrete_losses",
    "evaluate_loss",
    "evaluate_policy",
    "expected_backorders_by_double_integral",
    "fit_from_moments",
    "fit_logarithmic_bisection",
    "lambert_w_neg1",
    "limited_expected_value",
    "loss1",
    "loss2",
    "loss_c",
    "min_reorder_point",
    "numeric_derivative",
    "numeric_integral_of_loss1",
    "numeric_loss",
    "quantile",
    "r_grid",
    "run_grid",
    "stockout_frequency_by_integral",
]
