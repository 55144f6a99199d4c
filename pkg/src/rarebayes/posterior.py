"""Posterior means for multinomial probabilities and their bounds.

All estimators here are Bayes posterior means of p_k given a count vector
under one of the prior families.  Three computation paths:

* closed forms for Dirichlet priors and finite Dirichlet mixtures,
* one-dimensional log-space quadrature for generic K=2 priors (including
  the exp-boundary counterexample),
* deterministic brackets that hold for *every* count vector: the
  (eps, gamma) sandwich from a bracketing certificate, and the parameter
  box bounds for mixtures.

Side indices ``k`` are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .bernstein import GammaCertificate
from .priors import (
    DirichletMixturePrior,
    DirichletPrior,
    ExpBoundaryPrior,
    PowerBoundaryPrior,
)
from .quadrature import LogIntegral, QuadSpec, log_beta_weighted_integral

__all__ = [
    "Counts",
    "PosteriorBracket",
    "PosteriorMean",
    "PosteriorEvaluator",
    "mean_dirichlet",
    "mean_mixture",
    "mean_quadrature",
    "posterior_mean",
    "bracket",
    "mixture_bracket",
    "exp_boundary_mean_floor",
    "odds_ratio",
]

#: Quadrature results with a larger estimated absolute error are flagged.
QUAD_ERROR_THRESHOLD = 1e-9


class Counts:
    """Outcome tallies (n_1, ..., n_K); n is their sum."""

    __slots__ = ("tallies", "n")

    def __init__(self, tallies):
        t = tuple(int(v) for v in tallies)
        if len(t) < 2:
            raise ValueError("need tallies for K >= 2 sides")
        if any(v < 0 for v in t):
            raise ValueError(f"tallies must be nonnegative: {t}")
        self.tallies = t
        self.n = sum(t)

    @property
    def k(self) -> int:
        return len(self.tallies)

    def __getitem__(self, i: int) -> int:
        return self.tallies[i]

    def __repr__(self):
        return f"Counts({list(self.tallies)})"

    def __eq__(self, other):
        return isinstance(other, Counts) and self.tallies == other.tallies

    def __hash__(self):
        return hash(self.tallies)


def _as_counts(counts) -> Counts:
    return counts if isinstance(counts, Counts) else Counts(counts)


def mean_dirichlet(alpha, counts, k: int) -> float:
    """Posterior mean (n_k + alpha_k) / (n + sum(alpha))."""
    counts = _as_counts(counts)
    alpha = np.asarray(alpha, dtype=float)
    if alpha.size != counts.k:
        raise ValueError("alpha and counts dimension mismatch")
    return (counts[k] + float(alpha[k])) / (counts.n + float(alpha.sum()))


def mean_mixture(prior: DirichletMixturePrior, counts, k: int) -> float:
    """Exact posterior mean under a finite Dirichlet mixture.

    Components are reweighted by their marginal likelihoods (ratios of
    Dirichlet normalizers, evaluated via log-gamma) and the component
    posterior means are averaged.
    """
    counts = _as_counts(counts)
    if counts.k != prior.k:
        raise ValueError("counts dimension mismatch")
    tall = np.asarray(counts.tallies, dtype=float)
    log_marg = np.empty(len(prior.weights))
    comp_means = np.empty(len(prior.weights))
    for j, (w, a) in enumerate(zip(prior.weights, prior.params)):
        log_marg[j] = (
            math.log(w)
            + gammaln(a.sum()) - gammaln(a).sum()
            + gammaln(a + tall).sum() - gammaln(a.sum() + counts.n)
        )
        comp_means[j] = (tall[k] + a[k]) / (counts.n + a.sum())
    log_marg -= log_marg.max()
    weights = np.exp(log_marg)
    weights /= weights.sum()
    return float(np.dot(weights, comp_means))


@dataclass(frozen=True)
class PosteriorMean:
    """A posterior mean with its numerical provenance."""

    mean: float
    method: str                      # "dirichlet" | "mixture" | "quadrature"
    error_estimate: float = 0.0
    flagged: bool = False
    notes: str = ""


def _quad_parts(prior, counts: Counts):
    """Return (a, b, log_smooth) for the K=2 integrand factorization."""
    n1, n2 = counts.tallies
    if isinstance(prior, ExpBoundaryPrior):
        return n1 + 1.0, n2 + 1.0, prior.log_kernel
    if isinstance(prior, PowerBoundaryPrior):
        if prior.k != 2:
            raise ValueError(
                "generic-prior quadrature is one-dimensional: reduce K > 2 "
                "priors with induce_two_sided first"
            )

        def log_smooth(t):
            t = np.asarray(t, dtype=float)
            pts = np.stack([t, 1.0 - t], axis=-1)
            vals = prior.tilde_pi_values(pts)
            with np.errstate(divide="ignore"):
                return np.log(vals)

        return n1 + float(prior.alpha[0]), n2 + float(prior.alpha[1]), log_smooth
    raise TypeError(f"quadrature path does not support {type(prior)!r}")


def mean_quadrature(prior, counts, k: int,
                    quad: QuadSpec = QuadSpec()) -> PosteriorMean:
    """Posterior mean for a generic K=2 prior by log-space quadrature.

    The integrand is evaluated in log space and normalized by its maximum,
    so counts up to 1e6 and beyond do not underflow.  The returned
    ``error_estimate`` is an absolute error estimate for the mean; results
    with an estimate above 1e-9 are flagged, never silently returned.
    """
    counts = _as_counts(counts)
    if counts.k != 2:
        raise ValueError("quadrature path supports K=2 counts")
    if k not in (0, 1):
        raise ValueError("side index out of range")
    a, b, log_smooth = _quad_parts(prior, counts)
    den = log_beta_weighted_integral(a, b, log_smooth, quad)
    if k == 0:
        num = log_beta_weighted_integral(a + 1.0, b, log_smooth, quad)
    else:
        num = log_beta_weighted_integral(a, b + 1.0, log_smooth, quad)
    mean = math.exp(num.log_value - den.log_value)
    err = mean * (num.rel_error + den.rel_error)
    flagged = (err > QUAD_ERROR_THRESHOLD) or not (num.converged and den.converged)
    notes = "" if not flagged else "quadrature error estimate above threshold"
    return PosteriorMean(mean, "quadrature", err, flagged, notes)


def posterior_mean(prior, counts, k: int,
                   quad: QuadSpec = QuadSpec()) -> PosteriorMean:
    """Posterior mean via the best available path for the prior."""
    counts = _as_counts(counts)
    if isinstance(prior, DirichletPrior):
        return PosteriorMean(mean_dirichlet(prior.alpha, counts, k), "dirichlet")
    if isinstance(prior, DirichletMixturePrior):
        return PosteriorMean(mean_mixture(prior, counts, k), "mixture")
    result = mean_quadrature(prior, counts, k, quad)
    if getattr(prior, "induced_from", None) is not None:
        return PosteriorMean(
            result.mean, result.method, result.error_estimate, result.flagged,
            (result.notes + "; " if result.notes else "")
            + "computed through a two-sided reduction: may differ from the "
              "full-dimensional posterior mean for non-Dirichlet priors",
        )
    return result


@dataclass(frozen=True)
class PosteriorBracket:
    """Deterministic sandwich for the posterior mean of side k.

    lower = (1-eps)(n_k + alpha_k)/(n + gamma),
    upper = (1+eps)(n_k + gamma)/(n + gamma).

    Valid for every count vector under the certified prior; in particular
    the lower bound is strictly positive even at zero observed counts.
    """

    lower: float
    upper: float
    gamma: float
    epsilon: float
    k: int

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError(f"invalid bracket [{self.lower}, {self.upper}]")

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "gamma": self.gamma,
                "epsilon": self.epsilon, "k": self.k}


def bracket(certificate: GammaCertificate, counts, k: int) -> PosteriorBracket:
    """Bracket the posterior mean of side k from a bracketing certificate."""
    counts = _as_counts(counts)
    if counts.k != len(certificate.alpha):
        raise ValueError("certificate and counts dimension mismatch")
    gamma, eps = certificate.gamma, certificate.epsilon
    alpha_k = certificate.alpha[k]
    # eps >= 1 (possible for wide mixture boxes) makes the raw lower bound
    # negative; 0 is then the valid bound since means are nonnegative
    lower = max(0.0, (1.0 - eps) * (counts[k] + alpha_k) / (counts.n + gamma))
    upper = (1.0 + eps) * (counts[k] + gamma) / (counts.n + gamma)
    return PosteriorBracket(lower, upper, gamma, eps, k)


def mixture_bracket(a: float, big_a: float, counts, k: int) -> tuple[float, float]:
    """Parameter-box bounds for a Dirichlet mixture posterior mean.

    Returns ((n_k + a)/(n + K*A), (n_k + A)/(n + K*a)).  The upper bound
    may exceed 1; it is reported as-is since it is a bound, not an
    estimate.
    """
    counts = _as_counts(counts)
    if not (0.0 <= a <= big_a < math.inf):
        raise ValueError(f"invalid box [{a}, {big_a}]")
    k_sides = counts.k
    lower = (counts[k] + a) / (counts.n + k_sides * big_a)
    upper_den = counts.n + k_sides * a
    if upper_den == 0.0:
        return lower, math.inf
    return lower, (counts[k] + big_a) / upper_den


def exp_boundary_mean_floor(n: int) -> float:
    """Deterministic floor 1 / (8 sqrt(max(1, n))) for the exp-boundary prior.

    The posterior mean of p_1 under the exp(-1/p_1) prior is at least this
    for every count vector of total n: the all-failure count (0, n) is the
    worst case by likelihood-ratio monotonicity, and even there the
    posterior keeps enough mass above 1/(4 sqrt(n)).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return 1.0 / (8.0 * math.sqrt(max(1, n)))


def odds_ratio(mu_b: float, p_hat_kbar: float, q_hat_kbar: float) -> float:
    """Posterior odds of blue vs red given one more observation of side kbar.

    Returns mu_B * p_hat / ((1 - mu_B) * q_hat).
    """
    if not (0.0 < mu_b < 1.0):
        raise ValueError("mu_b must be in (0, 1)")
    if q_hat_kbar <= 0.0:
        raise ValueError(
            "red posterior mean must be positive (it always is under a "
            "power-boundary prior)"
        )
    return mu_b * p_hat_kbar / ((1.0 - mu_b) * q_hat_kbar)


class PosteriorEvaluator:
    """Memoizing posterior-mean evaluator for hot Monte Carlo loops.

    Closed-form priors are evaluated directly; quadrature-path priors get
    a per-instance cache indexed by (tallies, k).
    """

    def __init__(self, prior, quad: QuadSpec = QuadSpec()):
        self.prior = prior
        self.quad = quad
        self._cache: dict[tuple, float] = {}
        if isinstance(prior, DirichletPrior):
            alpha = prior.alpha
            total = float(alpha.sum())

            def fast(tallies: tuple, k: int) -> float:
                return (tallies[k] + alpha[k]) / (sum(tallies) + total)

            self._fn = fast
            self.closed_form = True
        elif isinstance(prior, DirichletMixturePrior):
            self._fn = lambda tallies, k: mean_mixture(prior, Counts(tallies), k)
            self.closed_form = True
        else:
            self._fn = None
            self.closed_form = False

    def __call__(self, tallies: tuple, k: int) -> float:
        if self.closed_form:
            return self._fn(tallies, k)
        key = (tallies, k)
        hit = self._cache.get(key)
        if hit is None:
            hit = mean_quadrature(self.prior, Counts(tallies), k, self.quad).mean
            self._cache[key] = hit
        return hit
