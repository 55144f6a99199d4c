"""Bernstein polynomial approximation of prior smooth factors.

The degree-m Bernstein polynomial of a continuous function f on the
K-simplex is

    h_m(p) = sum_{|nu| = m} f(nu / m) * multinomial(m, nu) * prod p_i**nu_i.

It converges uniformly to f and has positive coefficients whenever f is
positive, which is what makes bracketing certificates possible: once the
uniform error drops below min(f) / (1 + 2/eps), every posterior mean under
the prior is sandwiched between Dirichlet-style bounds with constant
gamma = m + sum(alpha).  Coefficients are kept in log space (log-factorials
via log-gamma) so degrees past ~170 do not overflow, and evaluation uses
log-sum-exp with sorted accumulation so results do not depend on term
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .priors import (
    DirichletMixturePrior,
    DirichletPrior,
    ExpBoundaryPrior,
    PowerBoundaryPrior,
    simplex_grid,
)

__all__ = [
    "BernsteinApprox",
    "GammaCertificate",
    "bernstein_fit",
    "sup_error",
    "gamma_for_epsilon",
    "gamma_from_derivative_bound",
    "RoughPriorError",
]

# Grid-estimated smooth-factor minima enter certificates only after this
# safety factor; finite sampling cannot certify an infimum.
GRID_MIN_SAFETY = 0.9

_DEFAULT_COEFF_BUDGET = 1 << 24


class RoughPriorError(RuntimeError):
    """Degree search exceeded its cap: prior too rough for the requested eps."""


def _multi_indices(m: int, k: int) -> np.ndarray:
    """All K-part compositions of m, lexicographic, shape (T, K)."""
    if k == 1:
        return np.array([[m]], dtype=np.int64)
    if k == 2:
        nu1 = np.arange(m + 1, dtype=np.int64)
        return np.stack([nu1, m - nu1], axis=-1)
    rows = []
    for first in range(m + 1):
        rest = _multi_indices(m - first, k - 1)
        rows.append(np.column_stack([np.full(len(rest), first, dtype=np.int64),
                                     rest]))
    return np.concatenate(rows, axis=0)


def _coeff_count(m: int, k: int) -> int:
    return math.comb(m + k - 1, k - 1)


@dataclass(frozen=True)
class BernsteinApprox:
    """Fitted Bernstein polynomial of a prior's smooth factor."""

    degree: int
    k: int
    indices: np.ndarray          # (T, K) multi-indices
    log_coeffs: np.ndarray       # log(f(nu/m) * multinomial(m, nu))

    def evaluate(self, points: np.ndarray, chunk: int = 128) -> np.ndarray:
        """Evaluate h_m on an (N, K) array of simplex points."""
        points = np.asarray(points, dtype=float)
        single = points.ndim == 1
        if single:
            points = points[None, :]
        out = np.empty(points.shape[0])
        for lo in range(0, points.shape[0], chunk):
            out[lo:lo + chunk] = self._eval_chunk(points[lo:lo + chunk])
        return out[0] if single else out

    def _eval_chunk(self, pts: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            logp = np.log(pts)                               # (N, K)
            terms = self.indices[None, :, :] * logp[:, None, :]
        # 0 * log(0) is 0 for this product by convention.
        terms = np.where(self.indices[None, :, :] == 0, 0.0, terms)
        logs = self.log_coeffs[None, :] + terms.sum(axis=2)  # (N, T)
        return _logsumexp_sorted(logs)


def _logsumexp_sorted(logs: np.ndarray) -> np.ndarray:
    """Row-wise exp-sum of logs, accumulated in ascending order."""
    top = np.max(logs, axis=1, keepdims=True)
    top = np.where(np.isfinite(top), top, 0.0)
    shifted = np.sort(logs - top, axis=1)
    return np.exp(top[:, 0]) * np.sum(np.exp(shifted), axis=1)


def bernstein_fit(prior: PowerBoundaryPrior, m: int,
                  coeff_budget: int = _DEFAULT_COEFF_BUDGET) -> BernsteinApprox:
    """Fit the degree-m Bernstein polynomial of the prior's smooth factor.

    The smooth factor must be evaluable on the whole simplex, boundary
    included (the lattice nu/m hits it).  Raises when the coefficient
    table C(m + K - 1, K - 1) would exceed ``coeff_budget``; reduce to two
    sides first (``induce_two_sided``) for K > 3.
    """
    if m < 0:
        raise ValueError("degree must be nonnegative")
    k = prior.k
    if _coeff_count(m, k) > coeff_budget:
        raise MemoryError(
            f"coefficient table C({m}+{k - 1}, {k - 1}) = {_coeff_count(m, k)} "
            f"exceeds budget {coeff_budget}; reduce the prior to two sides "
            "with induce_two_sided before fitting"
        )
    if m == 0:
        # Degree 0: the constant f(barycenter).
        center = np.full(k, 1.0 / k)
        val = float(prior.tilde_pi_values(center))
        log_val = math.log(val) if val > 0.0 else -math.inf
        return BernsteinApprox(0, k, np.zeros((1, k), dtype=np.int64),
                               np.array([log_val]))
    indices = _multi_indices(m, k)
    nodes = indices / m
    vals = prior.tilde_pi_values(nodes)
    if np.any(vals < 0.0) or not np.all(np.isfinite(vals)):
        raise ValueError("smooth factor must be finite and nonnegative on "
                         "the degree lattice")
    log_multinom = gammaln(m + 1) - gammaln(indices + 1.0).sum(axis=1)
    with np.errstate(divide="ignore"):
        log_vals = np.log(vals)
    return BernsteinApprox(m, k, indices, log_vals + log_multinom)


def sup_error(prior: PowerBoundaryPrior, approx: BernsteinApprox,
              grid_resolution: int = 1024) -> float:
    """Grid estimate of max |h_m - tilde_pi| over the simplex."""
    if grid_resolution < 256:
        raise ValueError("grid_resolution must be at least 256 per dimension")
    grid = simplex_grid(prior.k, grid_resolution)
    return float(np.max(np.abs(approx.evaluate(grid) -
                               prior.tilde_pi_values(grid))))


@dataclass(frozen=True)
class GammaCertificate:
    """A bracketing constant gamma certified for a given eps.

    Certifies that for every count vector, the posterior mean of side k
    lies in [(1-eps)(n_k+alpha_k)/(n+gamma), (1+eps)(n_k+gamma)/(n+gamma)].
    A certificate at eps also certifies every larger eps.  ``method`` is
    one of bernstein_search, remark3prime, dirichlet_exact, mixture_box;
    grid-based methods are estimates, not proof-grade certificates.
    """

    gamma: float
    epsilon: float
    m_used: int
    sup_error_estimate: float | None
    method: str
    alpha: tuple
    grid_based: bool = False

    def __post_init__(self):
        if self.gamma < sum(self.alpha) - 1e-12:
            raise ValueError("gamma must be at least sum(alpha)")

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "m_used": self.m_used,
            "sup_error_estimate": self.sup_error_estimate,
            "method": self.method,
            "alpha": list(self.alpha),
        }

    def certifies(self, epsilon: float) -> bool:
        return self.epsilon <= epsilon + 1e-15


def mixture_box_certificate(prior: DirichletMixturePrior,
                            epsilon: float) -> GammaCertificate:
    """Bracketing certificate for a Dirichlet mixture with parameter box.

    With every component parameter in [a, A], the posterior mean obeys
    (n_k+a)/(n+KA) <= mean <= (n_k+A)/(n+Ka).  Taking alpha_k = a and
    gamma = K*A turns this into the standard sandwich with
    eps = max(0, A/(K a) - 1): the lower side is immediate, and the upper
    side follows because (n_k+A)(n+KA) / [(n_k+KA)(n+Ka)] is maximized at
    n_k = n, where it decreases from A/(Ka) (n = 0) toward 1.
    """
    a, big_a = prior.support_box
    if a <= 0.0:
        raise ValueError("mixture box certificate needs a > 0")
    k = prior.k
    eps_box = max(0.0, big_a / (k * a) - 1.0)
    if epsilon < eps_box - 1e-15:
        raise ValueError(
            f"mixture box [{a}, {big_a}] certifies eps >= {eps_box:.6g}, "
            f"got {epsilon}"
        )
    return GammaCertificate(
        gamma=k * big_a, epsilon=eps_box, m_used=0, sup_error_estimate=None,
        method="mixture_box", alpha=(a,) * k,
    )


def gamma_for_epsilon(prior, epsilon: float, grid_resolution: int = 2048,
                      m_cap: int = 1 << 16) -> GammaCertificate:
    """Smallest certified bracketing constant for the requested eps.

    Dirichlet priors certify eps = 0 with gamma = sum(alpha) exactly.
    Dirichlet mixtures go through the parameter-box route.  Generic
    power-boundary priors search for the least degree m whose Bernstein
    fit satisfies

        sup |h_m - tilde_pi|  <=  min(tilde_pi) / (1 + 2/eps)

    (grid sup-norm; grid-estimated minima are first multiplied by 0.9)
    by doubling from m = 1 and then bisecting; gamma = m + sum(alpha).
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must be in (0, 1)")
    if isinstance(prior, ExpBoundaryPrior):
        raise ValueError(
            "prior does not have power-function boundary behavior "
            "(exponential boundary decay); no bracketing certificate exists"
        )
    if isinstance(prior, DirichletPrior):
        return GammaCertificate(
            gamma=prior.alpha_sum, epsilon=0.0, m_used=0,
            sup_error_estimate=0.0, method="dirichlet_exact",
            alpha=tuple(prior.alpha.tolist()),
        )
    if isinstance(prior, DirichletMixturePrior):
        return mixture_box_certificate(prior, epsilon)
    if not isinstance(prior, PowerBoundaryPrior):
        raise TypeError(f"unsupported prior type {type(prior)!r}")

    tp_min, is_exact = prior.tilde_pi_min(grid_resolution)
    effective_min = tp_min if is_exact else GRID_MIN_SAFETY * tp_min
    if effective_min <= 0.0:
        raise ValueError("smooth factor minimum estimate is not positive")
    threshold = effective_min / (1.0 + 2.0 / epsilon)

    def err_at(m: int) -> float:
        return sup_error(prior, bernstein_fit(prior, m), grid_resolution)

    errors: dict[int, float] = {}

    def ok(m: int) -> bool:
        if m not in errors:
            errors[m] = err_at(m)
        return errors[m] <= threshold

    m = 1
    while not ok(m):
        m *= 2
        if m > m_cap:
            raise RoughPriorError(
                f"no degree up to {m_cap} meets the certificate threshold "
                f"{threshold:.3e}: prior too rough for eps = {epsilon}"
            )
    lo, hi = m // 2, m          # ok(hi) holds; search least m in (lo, hi]
    if m == 1:
        lo = -1 if ok(0) else 0
        hi = 0 if lo == -1 else 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    m_best = hi
    while m_best > 0 and ok(m_best - 1):    # guard against non-monotone error
        m_best -= 1
    return GammaCertificate(
        gamma=m_best + prior.alpha_sum, epsilon=epsilon, m_used=m_best,
        sup_error_estimate=errors[m_best], method="bernstein_search",
        alpha=tuple(prior.alpha.tolist()), grid_based=True,
    )


def gamma_from_derivative_bound(prior: PowerBoundaryPrior, epsilon: float,
                                max_abs_phi_prime: float,
                                min_phi: float) -> GammaCertificate:
    """Closed-form K=2 certificate from a derivative bound.

    For phi(x) = tilde_pi(x, 1-x) continuously differentiable, the degree

        m = ceil( (5/4) * (1 + 2/eps) * max|phi'| / min(phi) ) ** 2

    is large enough, giving gamma = alpha_1 + alpha_2 + m.  The caller
    supplies the analytic bounds max|phi'| and min(phi); there is no
    defined behavior for priors without a bounded derivative.  Any
    eps > 0 is accepted (the sandwich is defined for all of them).
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if prior.k != 2:
        raise ValueError("derivative-bound certificate applies to K=2 only")
    if min_phi <= 0.0:
        raise ValueError("min_phi must be positive")
    if max_abs_phi_prime < 0.0:
        raise ValueError("max_abs_phi_prime must be nonnegative")
    m = math.ceil(1.25 * (1.0 + 2.0 / epsilon) * max_abs_phi_prime / min_phi) ** 2
    return GammaCertificate(
        gamma=prior.alpha_sum + m, epsilon=epsilon, m_used=m,
        sup_error_estimate=None, method="remark3prime",
        alpha=tuple(prior.alpha.tolist()),
    )
