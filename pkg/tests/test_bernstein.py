"""Bernstein fits, sup-error estimates, and bracketing certificates."""

import math

import numpy as np
import pytest
from scipy.stats import binom

from rarebayes import (
    BernsteinApprox,
    DirichletMixturePrior,
    DirichletPrior,
    ExpBoundaryPrior,
    PowerBoundaryPrior,
    bernstein_fit,
    bracket,
    gamma_for_epsilon,
    gamma_from_derivative_bound,
    mean_mixture,
    prior_from_config,
    sup_error,
)
from rarebayes.priors import simplex_grid


def constant_prior(k=2, value=1.0):
    return PowerBoundaryPrior(
        [1.0] * k, lambda pts: np.full(np.asarray(pts).shape[:-1], value))


def sin_prior():
    return prior_from_config({
        "type": "power_boundary", "alpha": [1, 1],
        "tilde_pi": {"family": "sin", "offset": 2.0, "amplitude": 1.0,
                     "frequency": 1},
    })


def eval_bernstein_oracle(values, m, p1):
    """Independent K=2 evaluation: h_m(p) = E[f(B/m)], B ~ Bin(m, p1)."""
    nu = np.arange(m + 1)
    return np.array([
        float(np.dot(values, binom.pmf(nu, m, p))) for p in np.atleast_1d(p1)
    ])


class TestPartitionOfUnity:
    @pytest.mark.parametrize("m", [1, 2, 5, 17, 64, 256])
    def test_two_sides(self, m):
        h = bernstein_fit(constant_prior(2), m)
        grid = simplex_grid(2, 512)
        assert np.max(np.abs(h.evaluate(grid) - 1.0)) < 1e-10

    @pytest.mark.parametrize("m", [1, 3, 9, 33])
    def test_three_sides(self, m):
        h = bernstein_fit(constant_prior(3), m)
        grid = simplex_grid(3, 48)
        assert np.max(np.abs(h.evaluate(grid) - 1.0)) < 1e-10


class TestExactReproduction:
    def test_constant_any_degree(self):
        prior = constant_prior(2, 3.5)
        for m in (0, 1, 2, 7, 40):
            assert sup_error(prior, bernstein_fit(prior, m), 256) < 1e-10

    def test_linear_function_degree_one(self):
        prior = PowerBoundaryPrior([1, 1],
                                   lambda pts: np.asarray(pts)[..., 0])
        assert sup_error(prior, bernstein_fit(prior, 1), 512) < 1e-12

    def test_square_function_degree_two_at_center(self):
        # hand oracle: nodes 0, 1/2, 1 give values 0, 1/4, 1;
        # h_2(1/2) = 0*(1/4) + (1/4)*2*(1/4) + 1*(1/4) = 3/8
        prior = PowerBoundaryPrior([1, 1],
                                   lambda pts: np.asarray(pts)[..., 0] ** 2)
        h = bernstein_fit(prior, 2)
        assert h.evaluate(np.array([0.5, 0.5])) == pytest.approx(0.375,
                                                                 abs=1e-12)


class TestSupError:
    def test_matches_independent_dense_oracle(self):
        prior = sin_prior()
        m = 50
        approx = bernstein_fit(prior, m)
        resolution = 100_000
        ours = sup_error(prior, approx, resolution)
        p1 = np.arange(resolution + 1) / resolution
        values = 2.0 + np.sin(math.pi * np.arange(m + 1) / m)
        oracle_vals = eval_bernstein_oracle(values, m, p1)
        oracle = float(np.max(np.abs(oracle_vals -
                                     (2.0 + np.sin(math.pi * p1)))))
        assert ours == pytest.approx(oracle, abs=1e-9)

    def test_rejects_coarse_grid(self):
        prior = sin_prior()
        with pytest.raises(ValueError):
            sup_error(prior, bernstein_fit(prior, 2), 100)

    def test_error_vanishes_along_doubling_degrees(self):
        prior = sin_prior()
        errors = [sup_error(prior, bernstein_fit(prior, 2 ** j), 512)
                  for j in range(11)]
        assert errors[-1] < 5e-3
        assert errors[-1] < errors[0] / 100


class TestGammaSearch:
    def test_dirichlet_exact_for_every_eps(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            alpha = rng.uniform(0.3, 5.0, size=rng.integers(2, 5))
            prior = DirichletPrior(alpha)
            for eps in (0.05, 0.2, 0.5, 0.9):
                cert = gamma_for_epsilon(prior, eps)
                assert cert.gamma == float(alpha.sum())
                assert cert.method == "dirichlet_exact"
                assert cert.m_used == 0

    def test_uniform_two_sides_gamma_two(self):
        cert = gamma_for_epsilon(DirichletPrior([1, 1]), 0.37)
        assert cert.gamma == 2.0

    def test_exp_boundary_rejected(self):
        with pytest.raises(ValueError):
            gamma_for_epsilon(ExpBoundaryPrior(), 0.2)

    def test_matches_linear_scan_oracle(self):
        prior = sin_prior()
        eps = 0.2
        resolution = 2048
        cert = gamma_for_epsilon(prior, eps, grid_resolution=resolution)
        # independent scan: first degree whose (independently evaluated)
        # sup error clears the certificate threshold; exact minimum 2.0
        threshold = 2.0 / (1.0 + 2.0 / eps)
        p1 = np.arange(resolution + 1) / resolution
        target = 2.0 + np.sin(math.pi * p1)
        m_oracle = None
        for m in range(0, 200):
            nodes = np.arange(m + 1) / m if m else np.array([0.5])
            values = 2.0 + np.sin(math.pi * nodes)
            approx = eval_bernstein_oracle(values, m, p1) if m else \
                np.full_like(p1, values[0])
            if np.max(np.abs(approx - target)) <= threshold:
                m_oracle = m
                break
        assert cert.m_used == m_oracle
        assert cert.gamma == m_oracle + 2.0
        assert cert.method == "bernstein_search"

    def test_search_cap_error_names_roughness(self):
        from rarebayes import RoughPriorError
        prior = sin_prior()
        with pytest.raises(RoughPriorError):
            gamma_for_epsilon(prior, 0.001, grid_resolution=512, m_cap=2)

    def test_approx_stays_above_half_min_once_certified(self):
        prior = sin_prior()
        cert = gamma_for_epsilon(prior, 0.3)
        h = bernstein_fit(prior, cert.m_used)
        grid = simplex_grid(2, 512)
        assert np.min(h.evaluate(grid)) >= 0.5 * 2.0

    def test_coefficient_budget_advises_reduction(self):
        prior = constant_prior(4)
        with pytest.raises(MemoryError, match="induce_two_sided"):
            bernstein_fit(prior, 4096)


class TestEvaluationDeterminism:
    def test_order_independent_evaluation(self):
        prior = sin_prior()
        approx = bernstein_fit(prior, 33)
        perm = np.random.default_rng(5).permutation(len(approx.log_coeffs))
        shuffled = BernsteinApprox(approx.degree, approx.k,
                                   approx.indices[perm],
                                   approx.log_coeffs[perm])
        grid = simplex_grid(2, 300)
        assert np.array_equal(approx.evaluate(grid), shuffled.evaluate(grid))


class TestDerivativeBoundCertificate:
    def test_constant_smooth_factor_gives_alpha_sum(self):
        cert = gamma_from_derivative_bound(DirichletPrior([1.5, 2.5]), 0.3,
                                           0.0, 1.0)
        assert cert.gamma == 4.0
        assert cert.method == "remark3prime"

    def test_arithmetic_eps_one(self):
        cert = gamma_from_derivative_bound(DirichletPrior([1, 1]), 1.0, 0.5,
                                           1.0)
        assert cert.gamma == 6.0          # 2 + ceil(1.875)^2

    def test_arithmetic_eps_fifth(self):
        cert = gamma_from_derivative_bound(DirichletPrior([1, 1]), 0.2, 1.0,
                                           1.0)
        assert cert.gamma == 198.0        # 2 + ceil(13.75)^2

    def test_rejects_nonpositive_min(self):
        with pytest.raises(ValueError):
            gamma_from_derivative_bound(DirichletPrior([1, 1]), 0.2, 1.0, 0.0)


class TestMixtureBoxCertificate:
    def test_sandwich_contains_exact_mixture_means(self):
        rng = np.random.default_rng(23)
        for trial in range(8):
            ncomp = int(rng.integers(1, 4))
            params = rng.uniform(1.0, 3.5, size=(ncomp, 2))
            weights = rng.uniform(0.2, 1.0, size=ncomp)
            weights /= weights.sum()
            prior = DirichletMixturePrior(weights, params)
            cert = gamma_for_epsilon(prior, 0.9)
            assert cert.method == "mixture_box"
            for n in range(0, 31, 5):
                for x in range(0, n + 1, 3):
                    exact = mean_mixture(prior, (x, n - x), 0)
                    sandwich = bracket(cert, (x, n - x), 0)
                    assert sandwich.lower <= exact <= sandwich.upper

    def test_requested_eps_below_box_floor_rejected(self):
        prior = DirichletMixturePrior([0.5, 0.5], [[1, 1], [3, 1]],
                                      support_box=[1, 3])
        # box floor: A/(K a) - 1 = 3/2 - 1 = 0.5
        with pytest.raises(ValueError):
            gamma_for_epsilon(prior, 0.2)
        cert = gamma_for_epsilon(prior, 0.5)
        assert cert.gamma == 6.0
        assert cert.epsilon == pytest.approx(0.5)
