"""Tail bounds and sample-size threshold constants.

Everything here is deterministic arithmetic: exponential tail bounds for
binomial frequencies, a two-sample large-deviation bound, a Poisson-based
count threshold, and the explicit threshold chains built from them.

* ``accuracy_threshold``: smallest certified n*p_k such that the Bayes
  estimate of p_k has relative error below eps with probability >= 1-eps.
* ``comparison_constants``: the full constant chain (beta, c', d, M, N1,
  N2, N) certifying that two-dice posterior-mean comparisons respect
  p_kbar >= c*q_kbar up to slack delta with probability >= 1-eps, once
  the blue die has been tossed b_n >= N / p_kbar times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .bernstein import GammaCertificate, gamma_for_epsilon

__all__ = [
    "chernoff_bound",
    "two_sample_tail_bound",
    "poisson_tail_threshold",
    "poisson_cdf",
    "AccuracyThreshold",
    "accuracy_threshold",
    "uniform_prior_mse",
    "ComparisonConstants",
    "comparison_constants",
]


def chernoff_bound(c: float, d: float) -> float:
    """Binomial frequency tail bound exp((1-c)*d).

    For S_n ~ Binomial(n, p) and 1 < c < 2, d > 0, both deviations

        P(S_n/n >= c*p + d/n)   and   P(S_n/n <= p/c - d/n)

    are at most exp((1-c)*d).  The convexity argument behind the bound
    needs c in (1, 2); other values are rejected.
    """
    if not 1.0 < c < 2.0:
        raise ValueError(f"c must lie in (1, 2), got {c}")
    if d <= 0.0:
        raise ValueError(f"d must be positive, got {d}")
    return math.exp((1.0 - c) * d)


def two_sample_tail_bound(c: float, c_prime: float, d: float) -> float:
    """Two-sample large-deviation bound (c'/c) ** (c'*d / (c'+1)).

    For independent S_n ~ Bin(n, p), T_m ~ Bin(m, q) with p >= c*q and
    0 < c' < c, d > 0:

        P( T_m/m >= S_n/(c'*n) + d/min(n, m) ) <= (c'/c) ** (c'*d/(c'+1)).
    """
    if not 0.0 < c_prime < c:
        raise ValueError(f"need 0 < c_prime < c, got c'={c_prime}, c={c}")
    if d <= 0.0:
        raise ValueError(f"d must be positive, got {d}")
    return (c_prime / c) ** (c_prime * d / (c_prime + 1.0))


def poisson_cdf(m: float, nu: float) -> float:
    """P(W <= m) for W ~ Poisson(nu), exact log-space accumulation."""
    if nu < 0.0:
        raise ValueError("nu must be nonnegative")
    top = math.floor(m)
    if top < 0:
        return 0.0
    if nu == 0.0:
        return 1.0
    k = np.arange(top + 1, dtype=float)
    logs = k * math.log(nu) - nu - gammaln(k + 1.0)
    peak = float(np.max(logs))
    return float(math.exp(peak) * np.sum(np.sort(np.exp(logs - peak))))


def poisson_tail_threshold(m: float, epsilon: float) -> int:
    """Threshold N such that n*p >= N implies P(Bin(n, p) <= m) <= eps.

    Constructive: N0 is the least integer nu with P(Poisson(nu) <= m)
    below eps/2 (the Poisson lower tail is decreasing in its mean), and
    N = ceil(2*N0/eps) covers both the small-p regime (Poisson
    approximation, total-variation error <= p) and the large-p regime
    (binomial distributions are stochastically increasing in n and p).
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must be in (0, 1)")
    if m < 0.0 or not math.isfinite(m):
        raise ValueError("m must be finite and nonnegative")
    target = 0.5 * epsilon

    def small_enough(nu: int) -> bool:
        return poisson_cdf(m, float(nu)) < target

    hi = 1
    while not small_enough(hi):
        hi *= 2
        if hi > 1 << 40:
            raise ArithmeticError("Poisson threshold search ran away")
    lo = hi // 2 if hi > 1 else 0       # small_enough(lo) is False (or lo == 0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if small_enough(mid):
            hi = mid
        else:
            lo = mid
    n0 = hi
    return math.ceil(2.0 * n0 / epsilon)


@dataclass(frozen=True)
class AccuracyThreshold:
    """Threshold N for the single-die relative-accuracy guarantee.

    Whenever n * p_k >= N, the posterior mean of p_k is within eps
    relative error with probability at least 1 - eps.  ``method`` is
    "remark3pp" (explicit chain: N = ceil(8/eps^3 + 3*gamma/eps), built
    on a bracketing certificate at eps/5) or "markov_uniform" (uniform
    K=2 prior, Markov inequality: N = ceil(2/eps^3)).
    """

    N: int
    epsilon: float
    gamma: float
    method: str
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"N": self.N, "epsilon": self.epsilon, "gamma": self.gamma,
                "method": self.method, "metadata": dict(self.metadata)}


def accuracy_threshold(epsilon: float, certificate: GammaCertificate = None,
                       prior=None, method: str = "remark3pp") -> AccuracyThreshold:
    """Sample-size threshold for the relative-accuracy guarantee.

    The explicit route needs a bracketing certificate at eps/5; when the
    supplied certificate does not certify eps/5 and a prior is given, the
    certificate is re-requested at eps/5.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must be in (0, 1)")
    if method == "markov_uniform":
        return AccuracyThreshold(
            N=math.ceil(2.0 * epsilon ** -3), epsilon=epsilon, gamma=2.0,
            method="markov_uniform",
        )
    if method != "remark3pp":
        raise ValueError(f"unknown threshold method {method!r}")
    eps5 = epsilon / 5.0
    if certificate is None or not certificate.certifies(eps5):
        if prior is None:
            raise ValueError(
                "the explicit route needs a bracketing certificate at eps/5 "
                f"(= {eps5}); supply one or pass the prior to re-certify"
            )
        certificate = gamma_for_epsilon(prior, eps5)
    gamma = certificate.gamma
    n = math.ceil(8.0 * epsilon ** -3 + 3.0 * gamma / epsilon)
    return AccuracyThreshold(
        N=n, epsilon=epsilon, gamma=gamma, method="remark3pp",
        metadata={"c": 1.0 + epsilon / 4.0, "delta": eps5,
                  "d": 3.0 * epsilon ** -2},
    )


def uniform_prior_mse(n: int, p: float) -> float:
    """Exact mean squared error of (X+1)/(n+2) at Bin(n, p).

    Decays like 1/n for fixed p in (0, 1) and like 1/n^2 when p ~ 1/n.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return (n * p * (1.0 - p) + (1.0 - 2.0 * p) ** 2) / (n + 2.0) ** 2


@dataclass(frozen=True)
class ComparisonConstants:
    """Full constant chain for the two-dice comparison guarantee.

    Given c > 0, slack delta, red-share floor eta, failure budget eps and
    a bracketing constant gamma:

    * (beta, c') satisfy the feasibility inequality
      (1-beta) / ((1+beta)(1-delta)) > c/c' + delta,
    * d makes the two-sample tail bound at most eps/2,
    * M = 3c(d+gamma)/(delta*eta) is the count of blue kbar-outcomes
      beyond which posterior-mean monotonicity is deterministic on the
      good event,
    * N1 = ceil(2*c*gamma/(c'*delta)) floors the blue tosses,
    * N2 makes P(at most M blue kbar-outcomes) <= eps/2,
    * N = max(N1, N2).
    """

    c: float
    delta: float
    eta: float
    epsilon: float
    gamma: float
    beta: float
    c_prime: float
    d: float
    M: float
    N1: int
    N2: int
    N: int

    def __post_init__(self):
        lhs = (1.0 - self.beta) / ((1.0 + self.beta) * (1.0 - self.delta))
        rhs = self.c / self.c_prime + self.delta
        if not lhs > rhs:
            raise ValueError(f"infeasible (beta, c'): {lhs} <= {rhs}")
        if two_sample_tail_bound(self.c, self.c_prime, self.d) > \
                0.5 * self.epsilon + 1e-12:
            raise ValueError("d does not push the two-sample bound below eps/2")
        m_expected = 3.0 * self.c * (self.d + self.gamma) / (self.delta * self.eta)
        if not math.isclose(self.M, m_expected, rel_tol=1e-12):
            raise ValueError("M does not match its defining formula")
        if self.N1 != math.ceil(2.0 * self.c * self.gamma /
                                (self.c_prime * self.delta)):
            raise ValueError("N1 does not match its defining formula")
        if self.N != max(self.N1, self.N2):
            raise ValueError("N must be max(N1, N2)")

    def to_dict(self) -> dict:
        return {"c": self.c, "delta": self.delta, "eta": self.eta,
                "epsilon": self.epsilon, "gamma": self.gamma,
                "beta": self.beta, "c_prime": self.c_prime, "d": self.d,
                "M": self.M, "N1": self.N1, "N2": self.N2, "N": self.N}


def _solve_d(c: float, c_prime: float, epsilon: float) -> float:
    """Least d with (c'/c)**(c'*d/(c'+1)) <= eps/2, in closed form."""
    return ((c_prime + 1.0) * math.log(2.0 / epsilon)
            / (c_prime * math.log(c / c_prime)))


def comparison_constants(c: float, delta: float, eta: float, epsilon: float,
                         certificate: GammaCertificate,
                         grid_step: float = 0.01) -> ComparisonConstants:
    """Select the constant chain by grid search minimizing N.

    beta ranges over multiples of ``grid_step`` (at least the
    certificate's certified eps, since the sandwich must hold with
    parameter beta), c' over c*(1 - j*grid_step).  Feasible pairs must
    clear the feasibility inequality by a strict margin of 1e-9.  If the
    grid admits no feasible pair it is refined once (step / 10) before
    giving up.
    """
    for name, value in (("delta", delta), ("eta", eta), ("epsilon", epsilon)):
        if not (0.0 < value < 1.0):
            raise ValueError(f"{name} must be in (0, 1), got {value}")
    if c <= 0.0:
        raise ValueError("c must be positive")

    gamma = certificate.gamma
    margin = 1e-9

    def search(step: float):
        betas = [round(i * step, 12) for i in range(1, int(1.0 / step))]
        betas = [b for b in betas if b >= certificate.epsilon - 1e-15]
        best = None
        for j in range(1, int(1.0 / step)):
            c_prime = c * (1.0 - j * step)
            if c_prime <= 0.0:
                continue
            beta = next(
                (b for b in betas
                 if (1.0 - b) / ((1.0 + b) * (1.0 - delta))
                 > c / c_prime + delta + margin),
                None,
            )
            if beta is None:
                continue
            d = _solve_d(c, c_prime, epsilon)
            n1 = math.ceil(2.0 * c * gamma / (c_prime * delta))
            m = 3.0 * c * (d + gamma) / (delta * eta)
            n2 = poisson_tail_threshold(m, 0.5 * epsilon)
            n = max(n1, n2)
            if best is None or n < best[0]:
                best = (n, beta, c_prime, d, m, n1, n2)
        return best

    best = search(grid_step)
    if best is None:
        best = search(grid_step / 10.0)
    if best is None:
        raise ValueError(
            "no feasible (beta, c') found: delta too large for this c, or "
            "the certificate's eps leaves no room for beta"
        )
    n, beta, c_prime, d, m, n1, n2 = best
    return ComparisonConstants(
        c=c, delta=delta, eta=eta, epsilon=epsilon, gamma=gamma, beta=beta,
        c_prime=c_prime, d=d, M=m, N1=n1, N2=n2, N=n,
    )
