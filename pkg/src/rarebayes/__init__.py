"""Bayes estimates for multinomial probabilities of rare events.

Posterior means under priors with power-function boundary behavior stay
within a constant relative factor of the truth once the expected count of
the rare outcome clears a prior-dependent threshold; this package computes
the estimates, the deterministic brackets certifying that behavior, the
explicit thresholds, and runs seeded desk-scale verification suites for
both the guarantees and the counterexamples that delimit them.
"""

from .bernstein import (
    BernsteinApprox,
    GammaCertificate,
    RoughPriorError,
    bernstein_fit,
    gamma_for_epsilon,
    gamma_from_derivative_bound,
    sup_error,
)
from .bounds import (
    AccuracyThreshold,
    ComparisonConstants,
    accuracy_threshold,
    chernoff_bound,
    comparison_constants,
    poisson_cdf,
    poisson_tail_threshold,
    two_sample_tail_bound,
    uniform_prior_mse,
)
from .posterior import (
    Counts,
    PosteriorBracket,
    PosteriorEvaluator,
    PosteriorMean,
    bracket,
    exp_boundary_mean_floor,
    mean_dirichlet,
    mean_mixture,
    mean_quadrature,
    mixture_bracket,
    odds_ratio,
    posterior_mean,
)
from .priors import (
    ClassifyReport,
    DirichletMixturePrior,
    DirichletPrior,
    ExpBoundaryPrior,
    PowerBoundaryPrior,
    PriorConfigError,
    SimplexPoint,
    classify_power_boundary,
    eval_density,
    induce_two_sided,
    prior_from_config,
)
from .quadrature import LogIntegral, QuadSpec, log_beta_weighted_integral
from .simulate import (
    DeterministicSchedule,
    ExperimentResult,
    IIDSchedule,
    PreconditionError,
    TwoDiceParams,
    exp_boundary_comparison_scan,
    find_exp_boundary_witness,
    find_scaling_witness,
    sample_counts,
    scaling_floor_demo,
    stream,
    verify_accuracy,
    verify_comparison,
    verify_comparison_random,
    verify_posterior_odds,
    wilson_interval,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyThreshold",
    "BernsteinApprox",
    "ClassifyReport",
    "ComparisonConstants",
    "Counts",
    "DeterministicSchedule",
    "DirichletMixturePrior",
    "DirichletPrior",
    "ExperimentResult",
    "ExpBoundaryPrior",
    "GammaCertificate",
    "IIDSchedule",
    "LogIntegral",
    "PosteriorBracket",
    "PosteriorEvaluator",
    "PosteriorMean",
    "PowerBoundaryPrior",
    "PreconditionError",
    "PriorConfigError",
    "QuadSpec",
    "RoughPriorError",
    "SimplexPoint",
    "TwoDiceParams",
    "accuracy_threshold",
    "bernstein_fit",
    "bracket",
    "chernoff_bound",
    "classify_power_boundary",
    "comparison_constants",
    "eval_density",
    "exp_boundary_comparison_scan",
    "exp_boundary_mean_floor",
    "find_exp_boundary_witness",
    "find_scaling_witness",
    "gamma_for_epsilon",
    "gamma_from_derivative_bound",
    "induce_two_sided",
    "log_beta_weighted_integral",
    "mean_dirichlet",
    "mean_mixture",
    "mean_quadrature",
    "mixture_bracket",
    "odds_ratio",
    "poisson_cdf",
    "poisson_tail_threshold",
    "posterior_mean",
    "prior_from_config",
    "sample_counts",
    "scaling_floor_demo",
    "stream",
    "sup_error",
    "two_sample_tail_bound",
    "uniform_prior_mse",
    "verify_accuracy",
    "verify_comparison",
    "verify_comparison_random",
    "verify_posterior_odds",
    "wilson_interval",
]
