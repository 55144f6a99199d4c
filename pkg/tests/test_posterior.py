"""Posterior means: closed forms, quadrature, brackets, floors, odds."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gammaln

from rarebayes import (
    Counts,
    DirichletMixturePrior,
    DirichletPrior,
    ExpBoundaryPrior,
    PosteriorEvaluator,
    PowerBoundaryPrior,
    bracket,
    exp_boundary_mean_floor,
    gamma_for_epsilon,
    mean_dirichlet,
    mean_mixture,
    mean_quadrature,
    mixture_bracket,
    odds_ratio,
    posterior_mean,
    prior_from_config,
)


def sin_prior():
    return prior_from_config({
        "type": "power_boundary", "alpha": [1, 1],
        "tilde_pi": {"family": "sin", "offset": 2.0, "amplitude": 1.0,
                     "frequency": 1},
    })


def quad_oracle_mean(density, n1, n2, k=0):
    """Independent integrator: posterior mean via scipy adaptive quadrature."""
    def num(t):
        pk = t if k == 0 else 1.0 - t
        return pk * t ** n1 * (1.0 - t) ** n2 * density(t)

    def den(t):
        return t ** n1 * (1.0 - t) ** n2 * density(t)

    a, _ = quad(num, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=200)
    b, _ = quad(den, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=200)
    return a / b


class TestDirichletClosedForm:
    def test_symmetric_counts(self):
        assert mean_dirichlet([1, 1], (1, 1), 0) == 0.5

    def test_uniform_identity_small(self):
        for n in range(0, 30):
            for x in range(0, n + 1):
                assert mean_dirichlet([1, 1], (x, n - x), 0) == (x + 1) / (n + 2)

    def test_shifted_prior_family(self):
        # alpha = (j, 1), n = 4j: mean of side 0 is (y + j)/(4j + j + 1)
        for j in (1, 2, 5, 11):
            n = 4 * j
            for y in (0, 1, n // 2, n):
                expect = (y + j) / (4 * j + j + 1)
                assert mean_dirichlet([j, 1], (y, n - y), 0) == \
                    pytest.approx(expect, rel=1e-15)

    def test_counts_validation(self):
        with pytest.raises(ValueError):
            Counts((-1, 2))
        with pytest.raises(ValueError):
            Counts((3,))


class TestMixtureClosedForm:
    def test_single_component_reduces_to_dirichlet(self):
        prior = DirichletMixturePrior([1.0], [[2.0, 3.0]])
        for counts in [(0, 0), (4, 1), (0, 9)]:
            assert mean_mixture(prior, counts, 0) == \
                pytest.approx(mean_dirichlet([2, 3], counts, 0), rel=1e-14)

    def test_symmetric_mixture_no_data(self):
        prior = DirichletMixturePrior([0.5, 0.5], [[1, 1], [2, 2]])
        assert mean_mixture(prior, (0, 0), 0) == pytest.approx(0.5, rel=1e-14)

    def test_against_quadrature_oracle(self):
        prior = DirichletMixturePrior([0.5, 0.5], [[1, 1], [3, 1]])

        def density(t):
            # normalized components: Dir(1,1) -> 1, Dir(3,1) -> 3 t^2
            return 0.5 * 1.0 + 0.5 * 3.0 * t ** 2

        got = mean_mixture(prior, (2, 0), 0)
        assert got == pytest.approx(quad_oracle_mean(density, 2, 0), abs=1e-10)

    def test_random_mixtures_match_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(5):
            ncomp = int(rng.integers(2, 4))
            params = rng.uniform(0.5, 4.0, size=(ncomp, 2))
            weights = rng.dirichlet(np.ones(ncomp))
            prior = DirichletMixturePrior(weights, params)

            def density(t, params=params, weights=weights):
                out = 0.0
                for w, (a, b) in zip(weights, params):
                    log_norm = gammaln(a + b) - gammaln(a) - gammaln(b)
                    out += w * math.exp(log_norm) * t ** (a - 1) \
                        * (1 - t) ** (b - 1)
                return out

            n1, n2 = int(rng.integers(0, 8)), int(rng.integers(0, 8))
            got = mean_mixture(prior, (n1, n2), 0)
            assert got == pytest.approx(quad_oracle_mean(density, n1, n2),
                                        abs=1e-9)


class TestQuadraturePath:
    def test_uniform_matches_closed_form(self):
        got = mean_quadrature(DirichletPrior([1, 1]), (1, 1), 0)
        assert got.mean == pytest.approx(0.5, abs=1e-12)
        assert not got.flagged

    def test_generic_path_matches_dirichlet_closed_form(self):
        prior = PowerBoundaryPrior(
            [2, 3], lambda pts: np.ones(np.asarray(pts).shape[:-1]))
        got = mean_quadrature(prior, (5, 7), 0)
        assert got.mean == pytest.approx(7.0 / 17.0, abs=1e-12)

    def test_randomized_alpha_counts_match_closed_form(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            alpha = rng.uniform(0.3, 5.0, size=2)
            prior = PowerBoundaryPrior(
                alpha, lambda pts: np.ones(np.asarray(pts).shape[:-1]))
            n = int(rng.integers(0, 200))
            x = int(rng.integers(0, n + 1)) if n else 0
            k = int(rng.integers(0, 2))
            got = mean_quadrature(prior, (x, n - x), k)
            expect = mean_dirichlet(alpha, (x, n - x), k)
            assert got.mean == pytest.approx(expect, abs=1e-9)
            assert not got.flagged

    def test_huge_counts_no_underflow(self):
        n = 10 ** 6
        got = mean_quadrature(DirichletPrior([1, 1]), (13, n - 13), 0)
        assert got.mean == pytest.approx(14.0 / (n + 2), rel=1e-10)

    def test_exp_boundary_means_respect_floor(self):
        prior = ExpBoundaryPrior()
        for n in (0, 10, 100):
            got = mean_quadrature(prior, (0, n), 0)
            assert got.mean >= exp_boundary_mean_floor(n)
            oracle = quad_oracle_mean(lambda t: math.exp(-1.0 / t)
                                      if t > 0 else 0.0, 0, n)
            assert got.mean == pytest.approx(oracle, rel=1e-8)

    def test_normalization_across_sides(self):
        for prior in (sin_prior(), ExpBoundaryPrior(),
                      PowerBoundaryPrior([0.5, 1.7], lambda pts: np.ones(
                          np.asarray(pts).shape[:-1]))):
            for counts in [(0, 0), (3, 9), (40, 2)]:
                m0 = mean_quadrature(prior, counts, 0).mean
                m1 = mean_quadrature(prior, counts, 1).mean
                assert m0 + m1 == pytest.approx(1.0, abs=1e-10)

    def test_rejects_more_than_two_sides(self):
        prior = PowerBoundaryPrior(
            [1, 1, 1], lambda pts: np.ones(np.asarray(pts).shape[:-1]))
        with pytest.raises(ValueError, match="induce_two_sided"):
            mean_quadrature(prior, (1, 1), 0)


class TestNormalizationClosedForms:
    def test_dirichlet_sides_sum_to_one(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            k = int(rng.integers(2, 6))
            alpha = rng.uniform(0.3, 4.0, size=k)
            tallies = tuple(int(v) for v in rng.integers(0, 30, size=k))
            total = sum(mean_dirichlet(alpha, tallies, j) for j in range(k))
            assert total == pytest.approx(1.0, abs=1e-10)

    def test_mixture_sides_sum_to_one(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            k = int(rng.integers(2, 5))
            ncomp = int(rng.integers(1, 4))
            prior = DirichletMixturePrior(
                rng.dirichlet(np.ones(ncomp)),
                rng.uniform(0.5, 4.0, size=(ncomp, k)))
            tallies = tuple(int(v) for v in rng.integers(0, 20, size=k))
            total = sum(mean_mixture(prior, tallies, j) for j in range(k))
            assert total == pytest.approx(1.0, abs=1e-10)


class TestBracket:
    def test_uniform_example(self):
        cert = gamma_for_epsilon(DirichletPrior([1, 1]), 0.2)
        b = bracket(cert, (1, 1), 0)
        assert (b.lower, b.upper) == (0.5, 0.75)     # dirichlet route: eps = 0
        assert 0.5 in b

    def test_zero_numerator_lower_bound_positive(self):
        cert = gamma_for_epsilon(sin_prior(), 0.2)
        for n in (0, 1, 10, 100, 10 ** 4):
            b = bracket(cert, (0, n), 0)
            assert b.lower > 0.0

    def test_quadrature_mean_inside_bracket_random_counts(self):
        prior = sin_prior()
        cert = gamma_for_epsilon(prior, 0.2)
        rng = np.random.default_rng(41)
        for _ in range(40):
            n = int(rng.integers(0, 101))
            x = int(rng.integers(0, n + 1)) if n else 0
            mean = mean_quadrature(prior, (x, n - x), 0).mean
            b = bracket(cert, (x, n - x), 0)
            assert b.lower - 1e-9 <= mean <= b.upper + 1e-9

    def test_prior_mean_at_no_data(self):
        # with no observations every path returns the prior mean
        prior = DirichletPrior([2, 6])
        assert posterior_mean(prior, (0, 0), 0).mean == pytest.approx(0.25)
        mix = DirichletMixturePrior([0.5, 0.5], [[1, 1], [3, 1]])
        prior_mean = 0.5 * 0.5 + 0.5 * 0.75
        assert posterior_mean(mix, (0, 0), 0).mean == \
            pytest.approx(prior_mean, rel=1e-12)


class TestMixtureBracket:
    def test_degenerate_box_is_exact(self):
        lower, upper = mixture_bracket(1.0, 1.0, (1, 1), 0)
        assert lower == upper == 0.5

    def test_spec_arithmetic_case(self):
        lower, upper = mixture_bracket(1.0, 3.0, (2, 0), 0)
        assert lower == pytest.approx(3.0 / 8.0)
        assert upper == pytest.approx(5.0 / 4.0)   # a bound may exceed 1

    def test_exhaustive_containment_up_to_fifty(self):
        prior = DirichletMixturePrior([0.5, 0.5], [[1, 1], [3, 1]],
                                      support_box=[1, 3])
        for n in range(0, 51):
            for x in range(0, n + 1):
                exact = mean_mixture(prior, (x, n - x), 0)
                lower, upper = mixture_bracket(1.0, 3.0, (x, n - x), 0)
                assert lower <= exact <= upper


class TestExpBoundaryFloor:
    def test_values(self):
        assert exp_boundary_mean_floor(0) == 0.125
        assert exp_boundary_mean_floor(100) == 0.0125

    def test_quadrature_confirms_at_n_25(self):
        got = mean_quadrature(ExpBoundaryPrior(), (0, 25), 0)
        assert got.mean >= 0.025

    def test_floor_holds_for_every_count_vector(self):
        prior = ExpBoundaryPrior()
        for n in (0, 1, 7, 40):
            floor = exp_boundary_mean_floor(n)
            for x in range(0, n + 1, max(1, n // 5)):
                assert mean_quadrature(prior, (x, n - x), 0).mean >= floor


class TestOddsRatio:
    def test_symmetric(self):
        assert odds_ratio(0.5, 0.3, 0.3) == pytest.approx(1.0)

    def test_prior_odds(self):
        assert odds_ratio(0.75, 0.3, 0.3) == pytest.approx(3.0)

    def test_closed_form_case(self):
        p_hat = mean_dirichlet([1, 1], (3, 7), 0)    # 4/12
        q_hat = mean_dirichlet([1, 1], (1, 9), 0)    # 2/12
        assert odds_ratio(0.5, p_hat, q_hat) == pytest.approx(2.0)

    def test_rejects_zero_red_mean(self):
        with pytest.raises(ValueError):
            odds_ratio(0.5, 0.3, 0.0)


class TestSideOneMonotonicity:
    """For two sides and fixed n, the side-0 mean is nondecreasing in its
    count.  (Specific to two sides; not asserted for more.)"""

    def test_closed_forms(self):
        rng = np.random.default_rng(43)
        for _ in range(5):
            alpha = rng.uniform(0.3, 4.0, size=2)
            for n in (1, 5, 20):
                means = [mean_dirichlet(alpha, (x, n - x), 0)
                         for x in range(n + 1)]
                assert np.all(np.diff(means) >= 0)
        mix = DirichletMixturePrior([0.4, 0.6], [[1, 2], [3, 1]])
        for n in (1, 6, 15):
            means = [mean_mixture(mix, (x, n - x), 0) for x in range(n + 1)]
            assert np.all(np.diff(means) >= -1e-12)

    def test_quadrature_paths(self):
        for prior in (sin_prior(), ExpBoundaryPrior()):
            for n in (1, 6, 15):
                means = [mean_quadrature(prior, (x, n - x), 0).mean
                         for x in range(n + 1)]
                assert np.all(np.diff(means) >= -1e-9)


class TestPosteriorEvaluator:
    def test_cache_matches_direct_calls(self):
        prior = sin_prior()
        ev = PosteriorEvaluator(prior)
        first = ev((3, 5), 0)
        again = ev((3, 5), 0)
        assert first == again
        assert first == mean_quadrature(prior, (3, 5), 0).mean

    def test_closed_form_path(self):
        ev = PosteriorEvaluator(DirichletPrior([2, 3]))
        assert ev.closed_form
        assert ev((5, 7), 0) == mean_dirichlet([2, 3], (5, 7), 0)
