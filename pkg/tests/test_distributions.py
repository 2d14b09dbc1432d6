"""Poisson generation, conjugate updates, Skellam PMF and partials."""

import math

import numpy as np
import pytest
import scipy.special
import scipy.stats
from hypothesis import given, settings, strategies as st

from rumba.distributions import (
    POISSON_INVERSION_MAX,
    GammaParams,
    RateVector,
    bessel_i_int,
    poisson_draw,
    poisson_draw_array,
    posterior_update,
    sample_coefficient_batch,
    sample_coefficient_vector,
    skellam_pmf,
    skellam_pmf_partials,
)
from conftest import rng


def exact_poisson_pmf(lam: float, upper: int) -> np.ndarray:
    """PMF by the multiplicative recurrence p_{k+1} = p_k * lam / (k+1)."""
    p = np.empty(upper + 1)
    p[0] = math.exp(-lam)
    for k in range(upper):
        p[k + 1] = p[k] * lam / (k + 1)
    return p


class TestPoissonDraw:
    def test_zero_rate_degenerate(self):
        g = rng(0)
        assert all(poisson_draw(0.0, g) == 0 for _ in range(100))

    def test_invalid_rates(self):
        g = rng(0)
        for bad in (-1.0, math.nan, math.inf):
            with pytest.raises(ValueError):
                poisson_draw(bad, g)

    def test_small_rate_moments(self):
        lam = 1.0 / 9.0
        n = 10**6
        draws = poisson_draw_array(np.full(n, lam), rng(1))
        se = math.sqrt(lam / n)
        assert abs(draws.mean() - lam) < 3 * se
        assert abs(draws.var() - lam) < 0.05 * lam

    def test_scalar_small_rate_moments(self):
        lam = 1.0 / 9.0
        g = rng(2)
        draws = np.array([poisson_draw(lam, g) for _ in range(10**5)])
        assert abs(draws.mean() - lam) < 4 * math.sqrt(lam / 10**5)

    def test_large_rate_total_variation(self):
        lam = 50.0
        assert lam >= POISSON_INVERSION_MAX  # exercises the rejection branch
        g = rng(3)
        n = 10**6
        draws = np.array([poisson_draw(lam, g) for _ in range(n)])
        upper = 150
        counts = np.bincount(draws, minlength=upper + 1)[: upper + 1]
        pmf = exact_poisson_pmf(lam, upper)
        tv = 0.5 * (np.abs(counts / n - pmf).sum() + (1.0 - pmf.sum()))
        assert tv < 0.01

    def test_array_matches_distribution_large(self):
        lam = 25.0
        draws = poisson_draw_array(np.full(3, lam), rng(4), size=20000).ravel()
        assert abs(draws.mean() - lam) < 4 * math.sqrt(lam / draws.size)

    def test_mixed_rates_shapes(self):
        lams = np.array([0.0, 0.5, 12.0])
        out = poisson_draw_array(lams, rng(5), size=50)
        assert out.shape == (50, 3)
        assert not out[:, 0].any()


class TestCoefficientVectors:
    def test_zero_rates_zero_vector(self):
        rates = RateVector(np.zeros(4), np.zeros(4))
        yp, ym, y = sample_coefficient_vector(rates, rng(0))
        assert not y.any() and not yp.any() and not ym.any()

    def test_difference_identity(self):
        rates = RateVector(np.full(6, 0.7), np.full(6, 0.3))
        yp, ym, y = sample_coefficient_vector(rates, rng(1))
        assert np.array_equal(y, yp - ym)

    def test_symmetric_rate_moments(self):
        rates = RateVector(np.ones(1), np.ones(1))
        ys = np.array([sample_coefficient_vector(rates, g)[2][0]
                       for g in [rng(2)] for _ in range(10**5)])
        assert abs(ys.mean()) < 4 * math.sqrt(2.0 / 10**5)
        assert abs(ys.var() - 2.0) < 0.1

    def test_pure_plus_nonnegative(self):
        rates = RateVector(np.array([2.0]), np.array([0.0]))
        g = rng(3)
        assert all(sample_coefficient_vector(rates, g)[2][0] >= 0 for _ in range(2000))

    def test_batch_matches_shapes(self):
        rates = RateVector(np.full(5, 0.2), np.full(5, 0.2))
        yp, ym, y = sample_coefficient_batch(rates, 64, rng(4))
        assert yp.shape == ym.shape == y.shape == (64, 5)
        assert np.array_equal(y, yp - ym)

    def test_components_match_skellam_pmf(self):
        """Chi-square goodness of fit of sampled Y against the Skellam PMF."""
        lp, lm = 0.8, 0.5
        rates = RateVector(np.array([lp]), np.array([lm]))
        _, _, y = sample_coefficient_batch(rates, 10**5, rng(6))
        ys = y[:, 0]
        lo, hi = -4, 5
        clipped = np.clip(ys, lo, hi)
        observed = np.array([(clipped == v).sum() for v in range(lo, hi + 1)])
        expected = np.array([skellam_pmf(v, lp, lm) for v in range(lo, hi + 1)])
        expected[0] += sum(skellam_pmf(v, lp, lm) for v in range(-30, lo))
        expected[-1] += sum(skellam_pmf(v, lp, lm) for v in range(hi + 1, 31))
        result = scipy.stats.chisquare(observed, expected / expected.sum() * len(ys))
        assert result.pvalue > 0.001


class TestGammaParams:
    def test_flat_defaults(self):
        p = GammaParams.flat(9)
        assert np.allclose(p.alpha_plus, 1.0 / 9.0)
        assert np.all(p.beta_plus == 1.0)

    def test_rates_elementwise_division(self):
        p = GammaParams(np.array([1.0, 4.0]), np.array([2.0, 2.0]),
                        np.array([2.0, 4.0]), np.array([1.0, 2.0]))
        r = p.rates()
        assert r.lambda_plus.tolist() == [0.5, 1.0]
        assert r.lambda_minus.tolist() == [2.0, 1.0]

    def test_validation(self):
        with pytest.raises(ValueError):
            GammaParams(np.array([-0.1]), np.array([1.0]), np.array([1.0]), np.array([1.0]))
        with pytest.raises(ValueError):
            GammaParams(np.array([1.0]), np.array([1.0]), np.array([0.0]), np.array([1.0]))


class TestPosteriorUpdate:
    def test_empty_list_unchanged(self):
        p = GammaParams.flat(3)
        assert posterior_update(p, []) is p

    def test_single_acceptance(self):
        p = GammaParams(np.array([0.5]), np.array([0.5]), np.array([1.0]), np.array([1.0]))
        out = posterior_update(p, [(np.array([3]), np.array([0]))])
        assert out.alpha_plus.tolist() == [3.5]
        assert out.beta_plus.tolist() == [2.0]
        assert out.alpha_minus.tolist() == [0.5]
        assert out.beta_minus.tolist() == [2.0]

    def test_two_acceptances(self):
        p = GammaParams(np.array([0.5, 0.5]), np.array([0.5, 0.5]),
                        np.array([1.0, 1.0]), np.array([1.0, 1.0]))
        out = posterior_update(p, [(np.array([1, 0]), np.array([0, 0])),
                                   (np.array([0, 2]), np.array([0, 0]))])
        assert out.alpha_plus.tolist() == [1.5, 2.5]
        assert out.beta_plus.tolist() == [3.0, 3.0]

    def test_input_unmodified(self):
        p = GammaParams.flat(2)
        before = p.alpha_plus.copy()
        posterior_update(p, [(np.array([1, 1]), np.array([0, 1]))])
        assert np.array_equal(p.alpha_plus, before)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            posterior_update(GammaParams.flat(2), [(np.array([1]), np.array([0]))])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(0, 6), st.integers(0, 6))
    def test_associative_over_batch_split(self, seed, n1, n2):
        g = rng(seed)
        k = 4
        batch = [(g.integers(0, 5, size=k), g.integers(0, 5, size=k))
                 for _ in range(n1 + n2)]
        p0 = GammaParams.flat(k, alpha0=0.25)
        split = posterior_update(posterior_update(p0, batch[:n1]), batch[n1:])
        joint = posterior_update(p0, batch)
        for attr in ("alpha_plus", "alpha_minus", "beta_plus", "beta_minus"):
            assert np.array_equal(getattr(split, attr), getattr(joint, attr))

    def test_conditional_expectation_identity(self):
        """With alpha0+ = alpha0- and beta0 = 1, the rate difference after an
        update equals the mean accepted move shrunk by n/(1+n)."""
        g = rng(11)
        k = 5
        accepted = [(g.integers(0, 4, size=k), g.integers(0, 4, size=k))
                    for _ in range(7)]
        p = posterior_update(GammaParams.flat(k), accepted)
        n = len(accepted)
        diff = p.rates().lambda_plus - p.rates().lambda_minus
        y_mean = np.mean([yp.astype(float) - ym for yp, ym in accepted], axis=0)
        assert np.allclose(diff, y_mean * n / (1.0 + n), atol=1e-12)


class TestBessel:
    def test_known_value(self):
        assert bessel_i_int(0, 2.0) == pytest.approx(2.2795853023360673, rel=1e-12)

    def test_negative_order_symmetry(self):
        for y in range(1, 6):
            assert bessel_i_int(-y, 1.7) == bessel_i_int(y, 1.7)

    def test_against_scipy(self):
        for n in range(0, 8):
            for z in (0.1, 0.5, 2.0, 7.5):
                assert bessel_i_int(n, z) == pytest.approx(
                    float(scipy.special.iv(n, z)), rel=1e-12)

    def test_zero_argument(self):
        assert bessel_i_int(0, 0.0) == 1.0
        assert bessel_i_int(3, 0.0) == 0.0


class TestSkellamPmf:
    def test_center_value(self):
        # e^-2 I_0(2)
        assert skellam_pmf(0, 1.0, 1.0) == pytest.approx(0.30850832255367105, rel=1e-12)

    def test_symmetry_equal_rates(self):
        for lam in (0.3, 1.0, 4.0):
            for y in range(1, 8):
                assert skellam_pmf(y, lam, lam) == pytest.approx(
                    skellam_pmf(-y, lam, lam), rel=1e-13)

    def test_swap_symmetry(self):
        assert skellam_pmf(3, 0.4, 1.9) == pytest.approx(
            skellam_pmf(-3, 1.9, 0.4), rel=1e-13)

    def test_normalization_unit_rates(self):
        total = sum(skellam_pmf(y, 1.0, 1.0) for y in range(-40, 41))
        assert abs(total - 1.0) < 1e-12

    def test_zero_rate_reductions(self):
        assert skellam_pmf(0, 0.0, 0.0) == 1.0
        assert skellam_pmf(2, 0.0, 0.0) == 0.0
        assert skellam_pmf(3, 2.0, 0.0) == pytest.approx(
            math.exp(-2.0) * 2.0**3 / 6.0, rel=1e-12)
        assert skellam_pmf(-2, 0.0, 1.5) == pytest.approx(
            math.exp(-1.5) * 1.5**2 / 2.0, rel=1e-12)

    def test_against_scipy(self):
        for lp, lm in ((0.1, 0.1), (1.0, 0.5), (5.0, 2.0), (0.05, 3.0)):
            for y in range(-6, 7):
                assert skellam_pmf(y, lp, lm) == pytest.approx(
                    float(scipy.stats.skellam.pmf(y, lp, lm)), rel=1e-9, abs=1e-300)

    def test_invalid_rates(self):
        with pytest.raises(ValueError):
            skellam_pmf(0, -1.0, 1.0)
        with pytest.raises(ValueError):
            skellam_pmf(0, math.inf, 1.0)


class TestSkellamPartials:
    def finite_difference(self, y, lp, lm, h=1e-6):
        dp = (skellam_pmf(y, lp + h, lm) - skellam_pmf(y, lp - h, lm)) / (2 * h)
        dm = (skellam_pmf(y, lp, lm + h) - skellam_pmf(y, lp, lm - h)) / (2 * h)
        return dp, dm

    def test_center_point(self):
        dp, dm = skellam_pmf_partials(0, 1.0, 1.0)
        fdp, fdm = self.finite_difference(0, 1.0, 1.0)
        assert dp == pytest.approx(fdp, rel=1e-5)
        assert dm == pytest.approx(fdm, rel=1e-5)

    def test_symmetry_at_zero(self):
        dp, dm = skellam_pmf_partials(0, 0.8, 0.8)
        assert dp == pytest.approx(dm, rel=1e-12)

    @pytest.mark.parametrize("y,lp,lm", [
        (2, 0.5, 1.5),
        (-1, 0.5, 1.5),
        (3, 2.0, 0.3),
        (0, 0.1, 0.1),
        (-3, 1.0, 2.0),
        (1, 5.0, 5.0),
    ])
    def test_finite_difference_agreement(self, y, lp, lm):
        dp, dm = skellam_pmf_partials(y, lp, lm)
        fdp, fdm = self.finite_difference(y, lp, lm)
        assert dp == pytest.approx(fdp, rel=1e-5)
        assert dm == pytest.approx(fdm, rel=1e-5)

    def test_requires_positive_rates(self):
        with pytest.raises(ValueError):
            skellam_pmf_partials(0, 0.0, 1.0)
