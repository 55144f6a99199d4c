"""Seeded Monte Carlo suites and deterministic witnesses.

Each suite estimates the probability of a statistical event at a grid of
data-generating parameters and reports it with a Wilson score interval;
a suite point "passes" when the interval is on the right side of the
bound being checked.  Replications use counter-based random streams
derived from (master seed, grid index, replication index), so results are
byte-identical across reruns and worker counts.

The witness searches are pure arithmetic: they locate parameters at which
the Bayes estimate provably fails (exp-boundary prior, or sample-size
scalings weaker than n * p).
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bernstein import GammaCertificate, gamma_for_epsilon
from .bounds import ComparisonConstants, comparison_constants
from .posterior import PosteriorEvaluator, exp_boundary_mean_floor
from .priors import ExpBoundaryPrior, SimplexPoint
from .quadrature import QuadSpec

__all__ = [
    "WILSON_Z_95",
    "wilson_interval",
    "stream",
    "sample_counts",
    "ExperimentResult",
    "TwoDiceParams",
    "DeterministicSchedule",
    "IIDSchedule",
    "PreconditionError",
    "verify_accuracy",
    "verify_comparison",
    "verify_comparison_random",
    "verify_posterior_odds",
    "find_exp_boundary_witness",
    "find_scaling_witness",
    "exp_boundary_comparison_scan",
    "scaling_floor_demo",
]

WILSON_Z_95 = 1.959963984540054


class PreconditionError(RuntimeError):
    """A run does not satisfy the preconditions of the bound it checks."""


def wilson_interval(successes: int, n: int,
                    z: float = WILSON_Z_95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        return (0.0, 1.0)
    phat = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (phat + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom
    # at the extremes the score bound is exactly the boundary value
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == n else min(1.0, center + half)
    return (lo, hi)


def stream(seed: int, *path: int) -> np.random.Generator:
    """Counter-based random stream for a (seed, path) pair.

    Each path gets a disjoint 2**128-draw block of one Philox keyspace,
    so parallel and serial execution see identical draws.
    """
    counter = 0
    for part in path:
        counter = (counter << 32) | (int(part) & 0xFFFFFFFF)
    return np.random.Generator(np.random.Philox(key=int(seed) & (1 << 128) - 1,
                                                counter=counter << 128))


def sample_counts(p: SimplexPoint, n: int, rng: np.random.Generator):
    """One multinomial draw of n tosses, as a tuple of tallies."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return (0,) * p.k
    return tuple(int(v) for v in rng.multinomial(n, p.coords))


@dataclass(frozen=True)
class ExperimentResult:
    """Summary of one Monte Carlo grid point.

    ``successes`` counts the tracked event (which may be a failure event;
    see the suite's ``event`` field).  ``runtime_ms`` is informational and
    is never serialized into result files.
    """

    replications: int
    successes: int
    empirical_rate: float
    wilson_ci_95: tuple[float, float]
    seed: int
    runtime_ms: int


def _mc_count(reps: int, jobs: int, rep_fn) -> int:
    """Count replications where rep_fn(index) is true; order-independent."""
    if jobs <= 1:
        return sum(bool(rep_fn(i)) for i in range(reps))
    bounds = np.linspace(0, reps, 4 * jobs + 1).astype(int)
    spans = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:])
             if hi > lo]

    def chunk(span):
        lo, hi = span
        return sum(bool(rep_fn(i)) for i in range(lo, hi))

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(chunk, spans))


def _run_point(reps: int, jobs: int, seed: int, rep_fn) -> ExperimentResult:
    t0 = time.perf_counter()
    hits = _mc_count(reps, jobs, rep_fn)
    ms = int((time.perf_counter() - t0) * 1000)
    return ExperimentResult(
        replications=reps, successes=hits, empirical_rate=hits / reps,
        wilson_ci_95=wilson_interval(hits, reps), seed=seed, runtime_ms=ms,
    )


# ---------------------------------------------------------------------------
# Single-die accuracy suite
# ---------------------------------------------------------------------------

def verify_accuracy(prior, epsilon: float, n_threshold: int, grid,
                    k: int = 0, reps: int = 10_000, seed: int = 0,
                    jobs: int = 1, quad: QuadSpec = QuadSpec()):
    """Estimate P(|mean_k - p_k| >= eps * p_k) at each grid point.

    ``grid`` is a sequence of (n, p) pairs with p a SimplexPoint (or
    coordinate list).  Points are expected to satisfy n * p_k >=
    ``n_threshold``; each point's record carries the Wilson interval of
    the failure rate and ``passed`` = (interval lower bound <= eps).
    """
    records = []
    evaluator = PosteriorEvaluator(prior, quad)
    k_sides = getattr(prior, "k", None)
    for index, (n, p) in enumerate(grid):
        point = p if isinstance(p, SimplexPoint) else SimplexPoint(p)
        if point.k != k_sides:
            raise ValueError("grid point dimension does not match the prior")
        pk = point[k]
        n = int(n)
        if k_sides == 2:
            def rep_fn(i, n=n, pk=pk):
                rng = stream(seed, index, i)
                x = int(rng.binomial(n, pk))
                mean = evaluator((x, n - x) if k == 0 else (n - x, x), k)
                return abs(mean - pk) >= epsilon * pk
        else:
            def rep_fn(i, n=n, pk=pk, point=point):
                rng = stream(seed, index, i)
                tallies = sample_counts(point, n, rng)
                mean = evaluator(tallies, k)
                return abs(mean - pk) >= epsilon * pk

        result = _run_point(reps, jobs, seed, rep_fn)
        lo, hi = result.wilson_ci_95
        records.append({
            "suite": "accuracy",
            "event": "relative_error_at_least_eps",
            "n": n,
            "p": [float(v) for v in point],
            "k": k,
            "np_k": n * pk,
            "epsilon": epsilon,
            "N": int(n_threshold),
            "replications": result.replications,
            "successes": result.successes,
            "empirical_rate": result.empirical_rate,
            "wilson_ci_95": [lo, hi],
            "threshold": epsilon,
            "passed": lo <= epsilon,
            "meets_precondition": n * pk >= n_threshold,
        })
    return records


# ---------------------------------------------------------------------------
# Two-dice comparison suites
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoDiceParams:
    """Data-generating parameters for the two-dice comparison."""

    p: SimplexPoint          # blue die
    q: SimplexPoint          # red die
    kbar: int                # compared side (0-based)
    c: float                 # required ratio p_kbar >= c * q_kbar

    def __post_init__(self):
        if self.p.k != self.q.k:
            raise ValueError("both dice need the same number of sides")
        if not 0 <= self.kbar < self.p.k:
            raise ValueError("kbar out of range")
        if self.c <= 0.0:
            raise ValueError("c must be positive")

    def check_ratio(self):
        if self.p[self.kbar] < self.c * self.q[self.kbar] - 1e-15:
            raise PreconditionError(
                f"p_kbar = {self.p[self.kbar]} < c * q_kbar = "
                f"{self.c * self.q[self.kbar]}"
            )


@dataclass(frozen=True)
class DeterministicSchedule:
    """Fixed die-choice sequence; `alternating` starts with blue."""

    pattern: str = "alternating"
    sequence: tuple = ()        # 1 = blue, 0 = red; used if pattern == "sequence"

    def b_n(self, n: int) -> int:
        if self.pattern == "alternating":
            return (n + 1) // 2
        if self.pattern == "sequence":
            if len(self.sequence) < n:
                raise ValueError("schedule sequence shorter than n")
            return int(sum(self.sequence[:n]))
        raise ValueError(f"unknown schedule pattern {self.pattern!r}")


@dataclass(frozen=True)
class IIDSchedule:
    """Blue chosen each period with probability mu_b, independent of the past."""

    mu_b: float

    def __post_init__(self):
        if not 0.0 < self.mu_b < 1.0:
            raise ValueError("mu_b must be in (0, 1)")


def _hits_of_kbar(point: SimplexPoint, kbar: int) -> float:
    return point[kbar]


def _comparison_record(suite, params, n, extra, result, one_minus_eps):
    lo, hi = result.wilson_ci_95
    rec = {
        "suite": suite,
        "event": "mean_blue_at_least_scaled_mean_red",
        "n": int(n),
        "p": [float(v) for v in params.p],
        "q": [float(v) for v in params.q],
        "kbar": params.kbar,
        "c": params.c,
        "replications": result.replications,
        "successes": result.successes,
        "empirical_rate": result.empirical_rate,
        "wilson_ci_95": [lo, hi],
        "threshold": one_minus_eps,
        "passed": lo >= one_minus_eps,
    }
    rec.update(extra)
    return rec


def verify_comparison(prior_blue, prior_red, params: TwoDiceParams,
                      schedule: DeterministicSchedule, delta: float,
                      epsilon: float, eta: float, n: int, n_threshold: int,
                      reps: int = 10_000, seed: int = 0, jobs: int = 1,
                      exploratory: bool = False, quad: QuadSpec = QuadSpec()):
    """Estimate P(mean_blue >= c(1-delta) * mean_red) under a fixed schedule.

    Preconditions for a labeled theorem check: b_n * p_kbar >= N and
    b_n / n <= 1 - eta.  Violations raise PreconditionError unless
    ``exploratory`` is set, in which case the run is tagged instead.
    """
    params.check_ratio()
    b = schedule.b_n(n)
    r = n - b
    pk = _hits_of_kbar(params.p, params.kbar)
    qk = _hits_of_kbar(params.q, params.kbar)
    violations = []
    if b * pk < n_threshold:
        violations.append(f"b_n * p_kbar = {b * pk} < N = {n_threshold}")
    if b / n > 1.0 - eta + 1e-15:
        violations.append(f"b_n / n = {b / n} > 1 - eta = {1.0 - eta}")
    if violations and not exploratory:
        raise PreconditionError("; ".join(violations))

    eval_blue = _side_evaluator_for(prior_blue, params.kbar, quad)
    eval_red = _side_evaluator_for(prior_red, params.kbar, quad)
    scale = params.c * (1.0 - delta)

    def rep_fn(i):
        rng = stream(seed, 0, i)
        y = int(rng.binomial(b, pk))
        z = int(rng.binomial(r, qk))
        return eval_blue(y, b) >= scale * eval_red(z, r)

    result = _run_point(reps, jobs, seed, rep_fn)
    extra = {
        "b_n": b, "delta": delta, "eta": eta, "epsilon": epsilon,
        "N": int(n_threshold),
        "schedule": schedule.pattern,
        "exploratory": bool(violations),
        "precondition_violations": violations,
    }
    return [_comparison_record("comparison", params, n, extra, result,
                               1.0 - epsilon)]


def _side_evaluator_for(prior, kbar: int, quad: QuadSpec):
    """Posterior mean of side kbar from (kbar-hits, total tosses)."""
    ev = PosteriorEvaluator(prior, quad)
    k_sides = getattr(prior, "k", 2)
    if k_sides != 2:
        raise ValueError(
            "comparison suites need K=2 priors; reduce with induce_two_sided"
        )
    if kbar == 0:
        return lambda hits, total: ev((hits, total - hits), 0)
    return lambda hits, total: ev((total - hits, hits), 1)


def verify_comparison_random(prior_blue, prior_red, params: TwoDiceParams,
                             mu_b: float, delta: float, epsilon: float,
                             n: int, n_threshold: int, reps: int = 10_000,
                             seed: int = 0, jobs: int = 1,
                             exploratory: bool = False,
                             quad: QuadSpec = QuadSpec()):
    """Comparison suite with iid random die choice (blue w.p. mu_b).

    Precondition for a labeled check: n * p_kbar >= N.
    """
    params.check_ratio()
    if not 0.0 < mu_b < 1.0:
        raise ValueError("mu_b must be in (0, 1)")
    pk = _hits_of_kbar(params.p, params.kbar)
    qk = _hits_of_kbar(params.q, params.kbar)
    violations = []
    if n * pk < n_threshold:
        violations.append(f"n * p_kbar = {n * pk} < N = {n_threshold}")
    if violations and not exploratory:
        raise PreconditionError("; ".join(violations))

    eval_blue = _side_evaluator_for(prior_blue, params.kbar, quad)
    eval_red = _side_evaluator_for(prior_red, params.kbar, quad)
    scale = params.c * (1.0 - delta)

    def rep_fn(i):
        rng = stream(seed, 0, i)
        b = int(rng.binomial(n, mu_b))
        y = int(rng.binomial(b, pk)) if b else 0
        z = int(rng.binomial(n - b, qk)) if n - b else 0
        return eval_blue(y, b) >= scale * eval_red(z, n - b)

    result = _run_point(reps, jobs, seed, rep_fn)
    extra = {
        "mu_b": mu_b, "delta": delta, "epsilon": epsilon,
        "N": int(n_threshold),
        "schedule": "iid",
        "exploratory": bool(violations),
        "precondition_violations": violations,
    }
    return [_comparison_record("comparison_random", params, n, extra, result,
                               1.0 - epsilon)]


def verify_posterior_odds(prior_blue, prior_red, mu_b: float, epsilon: float,
                          n: int, p: SimplexPoint, q: SimplexPoint,
                          kbar: int = 0, n_threshold: int | None = None,
                          reps: int = 10_000, seed: int = 0, jobs: int = 1,
                          exploratory: bool = False,
                          quad: QuadSpec = QuadSpec()):
    """Estimate P(posterior odds of blue vs red exceed (1-eps) prior odds).

    The observer sees one more outcome kbar of unknown color after n
    periods of iid die choices; the tracked event is

        mu_B * mean_blue / (mu_R * mean_red) > (1-eps) * mu_B / mu_R,

    equivalently mean_blue > (1-eps) * mean_red.  Requires p_kbar >=
    q_kbar; when ``n_threshold`` is given, n * p_kbar >= N is enforced.
    """
    p = p if isinstance(p, SimplexPoint) else SimplexPoint(p)
    q = q if isinstance(q, SimplexPoint) else SimplexPoint(q)
    if not 0.0 < mu_b < 1.0:
        raise ValueError("mu_b must be in (0, 1)")
    pk, qk = p[kbar], q[kbar]
    if pk < qk - 1e-15:
        raise PreconditionError(f"p_kbar = {pk} < q_kbar = {qk}")
    violations = []
    if n_threshold is not None and n * pk < n_threshold:
        violations.append(f"n * p_kbar = {n * pk} < N = {n_threshold}")
    if violations and not exploratory:
        raise PreconditionError("; ".join(violations))

    eval_blue = _side_evaluator_for(prior_blue, kbar, quad)
    eval_red = _side_evaluator_for(prior_red, kbar, quad)
    scale = 1.0 - epsilon
    prior_odds = mu_b / (1.0 - mu_b)

    def rep_fn(i):
        rng = stream(seed, 0, i)
        b = int(rng.binomial(n, mu_b))
        y = int(rng.binomial(b, pk)) if b else 0
        z = int(rng.binomial(n - b, qk)) if n - b else 0
        return eval_blue(y, b) > scale * eval_red(z, n - b)

    result = _run_point(reps, jobs, seed, rep_fn)
    lo, hi = result.wilson_ci_95
    return [{
        "suite": "odds",
        "event": "posterior_odds_above_scaled_prior_odds",
        "n": int(n),
        "p": [float(v) for v in p],
        "q": [float(v) for v in q],
        "kbar": kbar,
        "mu_b": mu_b,
        "epsilon": epsilon,
        "odds_threshold": scale * prior_odds,
        "N": None if n_threshold is None else int(n_threshold),
        "replications": result.replications,
        "successes": result.successes,
        "empirical_rate": result.empirical_rate,
        "wilson_ci_95": [lo, hi],
        "threshold": 1.0 - epsilon,
        "passed": lo >= 1.0 - epsilon,
        "exploratory": bool(violations),
        "precondition_violations": violations,
    }]


# ---------------------------------------------------------------------------
# Deterministic witnesses
# ---------------------------------------------------------------------------

def find_exp_boundary_witness(n_threshold: int, delta: float,
                              quad: QuadSpec = QuadSpec()) -> dict:
    """Parameters where the exp-boundary prior deterministically fails.

    Along p_1(n) = N * n**(-1/2 - delta) (so n**(1/2+delta) * p_1 >= N),
    the posterior-mean floor 1/(8 sqrt(n)) eventually exceeds 2 * p_1(n):
    from then on |mean - p_1| > p_1 for *every* outcome.  Returns the
    smallest such n (doubling then bisection; the defining inequality is
    monotone in n) together with the inequality values and a quadrature
    confirmation at the all-miss count and at the expected count.
    """
    if n_threshold < 1 or delta <= 0.0:
        raise ValueError("need N >= 1 and delta > 0")

    def p1(n: int) -> float:
        return n_threshold * n ** (-0.5 - delta)

    def holds(n: int) -> bool:
        return n > n_threshold ** 2 and \
            exp_boundary_mean_floor(n) > 2.0 * p1(n)

    hi = 2
    while not holds(hi):
        hi *= 2
        if hi > 1 << 62:
            raise ArithmeticError("witness search ran away")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    n = hi
    p1n = p1(n)
    prior = ExpBoundaryPrior()
    ev = PosteriorEvaluator(prior, quad)
    mean_all_miss = ev((0, n), 0)
    expected = math.ceil(n * p1n)
    mean_expected = ev((expected, n - expected), 0)
    return {
        "suite": "exp_boundary_witness",
        "N": int(n_threshold),
        "delta": delta,
        "n": n,
        "p1": p1n,
        "mean_floor": exp_boundary_mean_floor(n),
        "two_p1": 2.0 * p1n,
        "certificate_holds": exp_boundary_mean_floor(n) > 2.0 * p1n,
        "quad_mean_all_miss": mean_all_miss,
        "quad_mean_expected_count": mean_expected,
        "expected_count": expected,
        "quad_confirms": mean_all_miss > 2.0 * p1n
                         and mean_expected > 2.0 * p1n,
        "passed": exp_boundary_mean_floor(n) > 2.0 * p1n
                  and mean_all_miss > 2.0 * p1n and mean_expected > 2.0 * p1n,
    }


def find_scaling_witness(certificate: GammaCertificate, zeta, n_threshold: int,
                         scan_limit: int = 200_000,
                         n_cap: int = 10 ** 12) -> dict:
    """Parameters defeating a sample-size scaling weaker than n * p.

    For any zeta with limsup zeta(n)/n = infinity, there are n with
    zeta(n) * p_1(n) >= N yet a deterministic estimation failure: along
    p_1(n) = alpha_1 / (8n) the posterior mean stays above
    alpha_1 / (2(n + gamma)) > 2 * p_1(n) once n > gamma.  Scans n
    upward (linearly, then geometrically up to ``n_cap``); if no tested
    n qualifies the result reports failure (zeta may grow too slowly
    along the tested n).
    """
    alpha1 = float(certificate.alpha[0])
    gamma = certificate.gamma
    n_min = math.floor(max(alpha1 / 8.0, gamma)) + 1

    def qualifies(n: int) -> bool:
        return zeta(n) * alpha1 / (8.0 * n) >= n_threshold

    found = None
    for n in range(n_min, n_min + scan_limit):
        if qualifies(n):
            found = n
            break
    if found is None:
        n = n_min + scan_limit
        while n <= n_cap:
            if qualifies(n):
                found = n
                break
            n = math.ceil(n * 1.5)
    if found is None:
        return {
            "suite": "scaling_witness", "found": False, "passed": False,
            "reason": f"no n <= {n_cap} with zeta(n) * p1(n) >= {n_threshold} "
                      "along the tested n; zeta may grow too slowly there",
        }
    n = found
    p1n = alpha1 / (8.0 * n)
    lower = alpha1 / (2.0 * (n + gamma))
    return {
        "suite": "scaling_witness",
        "found": True,
        "N": int(n_threshold),
        "n": n,
        "p1": p1n,
        "gamma": gamma,
        "alpha1": alpha1,
        "mean_lower_bound": lower,
        "two_p1": 2.0 * p1n,
        "certificate_holds": lower > 2.0 * p1n,
        "zeta_times_p1": zeta(n) * p1n,
        "passed": lower > 2.0 * p1n and zeta(n) * p1n >= n_threshold
                  and n > gamma,
    }


# ---------------------------------------------------------------------------
# Comparison counterexample demos
# ---------------------------------------------------------------------------

def exp_boundary_comparison_scan(prior_blue, c: float, mu_b: float,
                                 n_threshold: int, n_max: int,
                                 reps: int = 10_000, seed: int = 0,
                                 jobs: int = 1, quad: QuadSpec = QuadSpec()):
    """Wrong-comparison probability when the red prior decays exponentially.

    Along p_1(n) = N/n, q_1(n) = N/(c n) (so p_1 = c * q_1 and n * p_1 =
    N), estimates P(mean_blue < (c/2) * mean_red) on a doubling n grid up
    to ``n_max`` and reports the first n where the rate's Wilson lower
    bound exceeds 1/2.  The red posterior mean comes from cached
    quadrature under the exp-boundary prior.
    """
    if n_threshold < 1 or c <= 0.0 or not 0.0 < mu_b < 1.0:
        raise ValueError("need N >= 1, c > 0, mu_b in (0, 1)")
    eval_blue = _side_evaluator_for(prior_blue, 0, quad)
    red = PosteriorEvaluator(ExpBoundaryPrior(), quad)
    half_c = 0.5 * c

    n0 = max(int(math.ceil(n_threshold)), int(math.ceil(n_threshold / c)), 10)
    grid = []
    n = n0
    while n <= n_max:
        grid.append(n)
        n *= 2

    records = []
    crossing = None
    for index, n in enumerate(grid):
        p1 = n_threshold / n
        q1 = n_threshold / (c * n)

        def rep_fn(i, n=n, p1=p1, q1=q1):
            rng = stream(seed, index, i)
            b = int(rng.binomial(n, mu_b))
            y = int(rng.binomial(b, p1)) if b else 0
            z = int(rng.binomial(n - b, q1)) if n - b else 0
            return eval_blue(y, b) < half_c * red((z, n - b - z), 0)

        result = _run_point(reps, jobs, seed, rep_fn)
        lo, hi = result.wilson_ci_95
        rec = {
            "suite": "exp_boundary_comparison",
            "event": "mean_blue_below_half_c_mean_red",
            "n": n,
            "p1": p1,
            "q1": q1,
            "c": c,
            "mu_b": mu_b,
            "N": int(n_threshold),
            "replications": result.replications,
            "successes": result.successes,
            "empirical_rate": result.empirical_rate,
            "wilson_ci_95": [lo, hi],
        }
        records.append(rec)
        if crossing is None and lo > 0.5:
            crossing = n
    records.append({
        "suite": "exp_boundary_comparison",
        "summary": True,
        "crossing_n": crossing,
        "n_max": int(n_max),
        "passed": crossing is not None,
    })
    return records


def scaling_floor_demo(prior_blue, prior_red, c: float, mu_b: float,
                       zeta, n_threshold: int, n_values,
                       reps: int = 10_000, seed: int = 0, jobs: int = 1,
                       quad: QuadSpec = QuadSpec()):
    """Wrong-comparison probability floor under n * zeta(p_1) >= N scalings.

    Along p_1(n) = c/n, q_1(n) = 1/n both events become rare at the same
    1/n rate; the wrong-comparison probability P(mean_blue < (c/2) *
    mean_red) stays bounded away from zero however large n grows.  For
    any zeta(t) with zeta(t)/t -> infinity as t -> 0+, n * zeta(p_1(n))
    still exceeds every N eventually, so no threshold phrased in
    n * zeta(p_1) can work.  Reports the per-n rates and the minimum over
    the largest tested n as the empirical floor estimate.
    """
    if c <= 0.0 or not 0.0 < mu_b < 1.0:
        raise ValueError("need c > 0 and mu_b in (0, 1)")
    eval_blue = _side_evaluator_for(prior_blue, 0, quad)
    eval_red = _side_evaluator_for(prior_red, 0, quad)
    half_c = 0.5 * c

    records = []
    rates = []
    for index, n in enumerate(int(v) for v in n_values):
        if n < c:
            raise ValueError(f"n = {n} must be at least c = {c}")
        p1 = c / n
        q1 = 1.0 / n

        def rep_fn(i, n=n, p1=p1, q1=q1):
            rng = stream(seed, index, i)
            b = int(rng.binomial(n, mu_b))
            y = int(rng.binomial(b, p1)) if b else 0
            z = int(rng.binomial(n - b, q1)) if n - b else 0
            return eval_blue(y, b) < half_c * eval_red(z, n - b)

        result = _run_point(reps, jobs, seed, rep_fn)
        lo, hi = result.wilson_ci_95
        rates.append(result.empirical_rate)
        records.append({
            "suite": "scaling_floor",
            "event": "mean_blue_below_half_c_mean_red",
            "n": n,
            "p1": p1,
            "q1": q1,
            "c": c,
            "mu_b": mu_b,
            "N": int(n_threshold),
            "zeta_condition_met": n * zeta(p1) >= n_threshold,
            "all_miss_blue_prob": (1.0 - p1) ** n,
            "replications": result.replications,
            "successes": result.successes,
            "empirical_rate": result.empirical_rate,
            "wilson_ci_95": [lo, hi],
        })
    window = max(1, len(rates) // 2)
    floor = min(rates[-window:]) if rates else 0.0
    records.append({
        "suite": "scaling_floor",
        "summary": True,
        "floor_estimate": floor,
        "floor_window": window,
        "limit_all_miss_blue_prob": math.exp(-c),
        "passed": floor > 0.0,
    })
    return records


# ---------------------------------------------------------------------------
# Constants helper shared by the experiment runner
# ---------------------------------------------------------------------------

def comparison_constants_for(prior_blue, prior_red, c: float, delta: float,
                             eta: float, epsilon: float,
                             certificate_epsilon: float = 0.01
                             ) -> ComparisonConstants:
    """Compute the comparison constant chain for a pair of priors.

    One bracketing constant must serve both priors; the sandwich only
    widens as gamma grows, so the larger certified gamma (with the larger
    certified eps) is valid for both.
    """
    cert_b = gamma_for_epsilon(prior_blue, certificate_epsilon)
    cert_r = gamma_for_epsilon(prior_red, certificate_epsilon)
    big = cert_b if cert_b.gamma >= cert_r.gamma else cert_r
    merged = GammaCertificate(
        gamma=big.gamma, epsilon=max(cert_b.epsilon, cert_r.epsilon),
        m_used=big.m_used, sup_error_estimate=big.sup_error_estimate,
        method=big.method, alpha=big.alpha, grid_based=big.grid_based,
    )
    return comparison_constants(c, delta, eta, epsilon, merged)
