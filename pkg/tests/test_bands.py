"""Tests for regression band constructions and the level/power experiment."""

import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from fdepth.bands import (
    Band,
    ExperimentConfig,
    PivotalSample,
    TABLE2_ALTERNATIVES,
    ed_band,
    fit_poly,
    k_band,
    level_power_experiment,
    poly_alternative,
    predict,
    residual_bootstrap,
    scheffe_band,
)


def make_fit(seed=3, n=100, sd=1.0, q=5):
    rng = np.random.default_rng(seed)
    x = rng.uniform(size=n)
    p5 = poly_alternative(5)
    y = p5(x) + sd * rng.standard_normal(n)
    return fit_poly(x, y, q)


class TestFitPoly:
    def test_exact_linear_fit(self):
        x = np.linspace(0.0, 1.0, 9)
        y = 2.0 + 3.0 * x
        fit = fit_poly(x, y, 1)
        assert np.allclose(fit.theta_hat, [2.0, 3.0], atol=1e-12)
        assert np.allclose(fit.residuals, 0.0, atol=1e-12)
        assert fit.s_hat == pytest.approx(0.0, abs=1e-12)

    def test_q0_reduces_to_mean_and_sd(self):
        rng = np.random.default_rng(11)
        x = rng.uniform(size=25)
        y = rng.standard_normal(25)
        fit = fit_poly(x, y, 0)
        assert fit.theta_hat[0] == pytest.approx(float(np.mean(y)), rel=1e-12)
        assert fit.s_hat == pytest.approx(float(np.std(y, ddof=1)), rel=1e-12)

    def test_matches_normal_equations_oracle(self):
        rng = np.random.default_rng(5)
        x = rng.uniform(size=80)
        y = poly_alternative(5)(x) + rng.standard_normal(80)
        fit = fit_poly(x, y, 5)
        X = np.column_stack([x**k for k in range(6)])
        oracle = np.linalg.solve(X.T @ X, X.T @ y)
        assert np.allclose(fit.theta_hat, oracle, rtol=1e-8)

    def test_residuals_sum_near_zero_with_intercept(self):
        fit = make_fit(seed=7)
        scale = float(np.abs(fit.y).sum())
        assert abs(float(fit.residuals.sum())) <= 1e-8 * scale

    def test_rank_deficient_design_raises(self):
        x = np.array([0.1, 0.1, 0.5, 0.5, 0.9, 0.9, 0.1, 0.5])
        y = np.arange(8.0)
        with pytest.raises(np.linalg.LinAlgError, match="rank"):
            fit_poly(x, y, 5)

    def test_too_few_observations(self):
        with pytest.raises(ValueError, match="observations"):
            fit_poly(np.arange(4.0), np.arange(4.0), 3)

    def test_basis_length_must_match_q(self):
        x = np.linspace(0, 1, 10)
        with pytest.raises(ValueError, match="basis"):
            fit_poly(x, x, 3, basis=(np.sin, np.cos))

    def test_custom_basis_matches_monomials(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(size=30)
        y = 1 + x - 2 * x**2 + 0.3 * rng.standard_normal(30)
        mono = fit_poly(x, y, 2)
        custom = fit_poly(x, y, 2, basis=(lambda u: u, lambda u: u**2))
        assert np.allclose(mono.theta_hat, custom.theta_hat, rtol=1e-10)
        grid = np.linspace(0, 1, 7)
        assert np.allclose(predict(mono, grid), predict(custom, grid), rtol=1e-10)

    def test_predict_matches_manual_design(self):
        fit = make_fit(seed=9, q=3)
        grid = np.linspace(0, 1, 13)
        manual = sum(fit.theta_hat[k] * grid**k for k in range(4))
        assert np.allclose(predict(fit, grid), manual, rtol=1e-12)


class TestResidualBootstrap:
    def test_pivotal_functions_centered(self):
        # bootstrap deviations average to zero at each evaluation point
        fit = make_fit(seed=3, sd=5.0)
        grid = np.linspace(0, 1, 51)
        piv = residual_bootstrap(fit, 2000, grid, seed=101)
        mean = piv.functions.mean(axis=0)
        se = piv.functions.std(axis=0, ddof=1) / math.sqrt(piv.B)
        assert np.all(np.abs(mean) < 3.0 * se)

    def test_all_zero_residuals_degenerate(self):
        x = np.linspace(0, 1, 12)
        y = 1.0 + 2.0 * x
        fit = fit_poly(x, y, 1)
        with pytest.raises(RuntimeError, match="degenerate"):
            residual_bootstrap(fit, 4, np.linspace(0, 1, 5), seed=0)

    def test_same_seed_reproducible(self):
        fit = make_fit(seed=4)
        grid = np.linspace(0, 1, 21)
        a = residual_bootstrap(fit, 32, grid, seed=9)
        b = residual_bootstrap(fit, 32, grid, seed=9)
        c = residual_bootstrap(fit, 32, grid, seed=10)
        assert np.array_equal(a.functions, b.functions)
        assert not np.array_equal(a.functions, c.functions)

    def test_prefix_stable_as_b_grows(self):
        # per-index substreams: growing B extends the sample without
        # changing the functions already drawn
        fit = make_fit(seed=4)
        grid = np.linspace(0, 1, 21)
        small = residual_bootstrap(fit, 8, grid, seed=9)
        big = residual_bootstrap(fit, 24, grid, seed=9)
        assert np.array_equal(big.functions[:8], small.functions)

    def test_scaling_by_power_of_two_is_bit_exact(self):
        rng = np.random.default_rng(15)
        x = rng.uniform(size=60)
        y = poly_alternative(5)(x) + rng.standard_normal(60)
        grid = np.linspace(0, 1, 31)
        base = residual_bootstrap(fit_poly(x, y, 5), 64, grid, seed=21)
        scaled = residual_bootstrap(fit_poly(x, 4.0 * y, 5), 64, grid, seed=21)
        assert np.array_equal(base.functions, scaled.functions)

    def test_scale_and_polynomial_shift_pivotality(self):
        # y -> 10y + (degree <= q polynomial) leaves the pivotal sample
        # unchanged apart from floating-point rounding
        rng = np.random.default_rng(16)
        x = rng.uniform(size=60)
        y = poly_alternative(5)(x) + rng.standard_normal(60)
        grid = np.linspace(0, 1, 31)
        base = residual_bootstrap(fit_poly(x, y, 5), 64, grid, seed=22)
        moved = residual_bootstrap(
            fit_poly(x, 10.0 * y + (1.0 + 2.0 * x - x**3), 5), 64, grid, seed=22
        )
        assert np.allclose(base.functions, moved.functions, atol=1e-8)

    def test_b_too_small(self):
        fit = make_fit()
        with pytest.raises(ValueError, match="at least 2"):
            residual_bootstrap(fit, 1, np.linspace(0, 1, 5), seed=0)

    def test_pivotal_sample_shape_validation(self):
        with pytest.raises(ValueError, match="B rows"):
            PivotalSample(
                eval_grid=np.linspace(0, 1, 4), functions=np.zeros((3, 5)), B=3
            )


class TestEdBand:
    def test_four_nested_functions_brute_force(self):
        # four strictly nested pivotal functions a*(1+x); the two inner
        # ones are deepest, so at alpha=0.5 the band is their hull
        fit = fit_poly(np.array([0.25, 0.75]), np.array([0.0, 2.0]), 0)
        assert fit.theta_hat[0] == pytest.approx(1.0)
        s = fit.s_hat
        grid = np.array([0.0, 0.5, 1.0])
        shape = 1.0 + grid
        rows = np.array([a * shape for a in (-1.5, -0.5, 0.5, 1.5)])
        piv = PivotalSample(eval_grid=grid, functions=rows, B=4)
        band = ed_band(fit, piv, 0.5)
        assert np.allclose(band.lower, 1.0 - s * 0.5 * shape, rtol=1e-12)
        assert np.allclose(band.upper, 1.0 + s * 0.5 * shape, rtol=1e-12)

    def test_alpha_zero_gives_pointwise_minmax(self):
        fit = make_fit(seed=6)
        grid = np.linspace(0, 1, 21)
        piv = residual_bootstrap(fit, 40, grid, seed=5)
        band = ed_band(fit, piv, 0.0)
        mu = predict(fit, grid)
        assert np.allclose(band.lower, mu + fit.s_hat * piv.functions.min(axis=0))
        assert np.allclose(band.upper, mu + fit.s_hat * piv.functions.max(axis=0))

    def test_band_inside_pointwise_minmax(self):
        fit = make_fit(seed=8)
        grid = np.linspace(0, 1, 41)
        piv = residual_bootstrap(fit, 200, grid, seed=13)
        band = ed_band(fit, piv, 0.1)
        outer = ed_band(fit, piv, 0.0)
        assert np.all(band.lower >= outer.lower)
        assert np.all(band.upper <= outer.upper)

    def test_tighter_than_scheffe_at_most_points(self):
        fit = make_fit(seed=12, n=100, sd=1.0)
        grid = np.linspace(0, 1, 201)
        piv = residual_bootstrap(fit, 500, grid, seed=31)
        ed = ed_band(fit, piv, 0.1)
        sch = scheffe_band(fit, 0.1, grid)
        inside = (ed.lower > sch.lower) & (ed.upper < sch.upper)
        assert float(inside.mean()) >= 0.9

    def test_band_metadata(self):
        fit = make_fit(seed=6)
        grid = np.linspace(0, 1, 11)
        piv = residual_bootstrap(fit, 16, grid, seed=2)
        band = ed_band(fit, piv, 0.1)
        assert band.method == "ED"
        assert band.level == pytest.approx(0.9)


class TestScheffeBand:
    def test_q0_is_classic_t_interval(self):
        rng = np.random.default_rng(14)
        y = rng.standard_normal(40)
        fit = fit_poly(rng.uniform(size=40), y, 0)
        band = scheffe_band(fit, 0.1, np.array([0.3, 0.7]))
        half = fit.s_hat / math.sqrt(40) * stats.t.ppf(0.95, 39)
        assert np.allclose(band.upper - band.mu_hat, half, rtol=1e-10)
        assert np.allclose(band.mu_hat - band.lower, half, rtol=1e-10)

    def test_wider_at_edges_for_centered_design(self):
        x = np.linspace(0, 1, 60)
        rng = np.random.default_rng(18)
        y = poly_alternative(5)(x) + rng.standard_normal(60)
        band = scheffe_band(fit_poly(x, y, 5), 0.1, np.array([0.0, 0.5, 1.0]))
        width = band.upper - band.lower
        assert width[0] > width[1]
        assert width[2] > width[1]

    def test_alpha_out_of_range(self):
        fit = make_fit()
        for bad in (0.0, 1.0, -0.2):
            with pytest.raises(ValueError, match="alpha"):
                scheffe_band(fit, bad, np.linspace(0, 1, 5))


class TestKBand:
    def test_constant_pivotal_functions_set_halfwidth(self):
        fit = make_fit(seed=6)
        grid = np.linspace(0, 1, 9)
        rows = np.vstack([np.full(9, 0.7), np.full(9, -0.7)])
        piv = PivotalSample(eval_grid=grid, functions=rows, B=2)
        band = k_band(fit, piv, 0.5)
        half = band.upper - band.mu_hat
        assert np.allclose(half, fit.s_hat * 0.7, rtol=1e-12)

    def test_halfwidth_constant_across_grid(self):
        fit = make_fit(seed=10)
        grid = np.linspace(0, 1, 33)
        piv = residual_bootstrap(fit, 100, grid, seed=3)
        band = k_band(fit, piv, 0.1)
        half = band.upper - band.lower
        assert np.allclose(half, half[0], rtol=1e-12)

    def test_quantile_rank_is_exact(self):
        # sup-norms 1..10: the 0.9 quantile rank must be exactly 9, which
        # float arithmetic alone would round up to 10
        fit = make_fit(seed=6)
        grid = np.linspace(0, 1, 5)
        rows = np.array([np.full(5, float(k)) for k in range(1, 11)])
        piv = PivotalSample(eval_grid=grid, functions=rows, B=10)
        band = k_band(fit, piv, 0.1)
        assert float(band.upper[0] - band.mu_hat[0]) == pytest.approx(
            fit.s_hat * 9.0, rel=1e-12
        )
        median_band = k_band(fit, piv, 0.5)
        assert float(median_band.upper[0] - median_band.mu_hat[0]) == pytest.approx(
            fit.s_hat * 5.0, rel=1e-12
        )

    def test_halfwidth_nonincreasing_in_alpha(self):
        fit = make_fit(seed=10)
        grid = np.linspace(0, 1, 33)
        piv = residual_bootstrap(fit, 200, grid, seed=4)
        widths = [
            float((k_band(fit, piv, a).upper - k_band(fit, piv, a).lower)[0])
            for a in (0.05, 0.1, 0.25, 0.5)
        ]
        assert all(w1 >= w2 for w1, w2 in zip(widths, widths[1:]))


class TestAlternatives:
    def test_unit_absolute_integral(self):
        for k in (4, 5, 6):
            p = poly_alternative(k)
            val, _ = quad(lambda u: abs(p(u)), 0.0, 1.0, limit=200)
            assert val == pytest.approx(1.0, abs=1e-6)

    def test_p5_closed_form(self):
        p5 = poly_alternative(5)
        x = np.linspace(0, 1, 17)
        assert np.allclose(p5(x), 192.0 * (x - 0.5) ** 5, rtol=1e-12)

    def test_even_degrees_are_odd_symmetric(self):
        p4 = poly_alternative(4)
        u = np.linspace(0.01, 0.49, 9)
        assert np.allclose(p4(0.5 - u), -p4(0.5 + u), rtol=1e-12)
        assert np.all(p4(0.5 + u) > 0)


class TestLevelPowerExperiment:
    def small_config(self, **kw):
        base = dict(
            n=30,
            q=3,
            sd=1.0,
            B=50,
            replicates=12,
            eval_points=41,
            seed=77,
        )
        base.update(kw)
        return ExperimentConfig(**base)

    def test_truth_as_alternative_reproduces_level(self):
        p5 = poly_alternative(5)
        cfg = self.small_config(alternatives=(("same", p5),))
        report = level_power_experiment(cfg)
        for method in ("Scheffe", "K", "ED"):
            assert report.rate("same", method) == report.rate("P_5", method)

    def test_report_has_all_rows(self):
        cfg = self.small_config()
        report = level_power_experiment(cfg)
        assert len(report.rows) == (1 + len(TABLE2_ALTERNATIVES)) * 3
        assert report.replicates == 12
        with pytest.raises(KeyError):
            report.rate("P_5", "bogus")

    def test_thread_count_does_not_change_rates(self):
        cfg = self.small_config()
        seq = level_power_experiment(cfg, threads=1)
        par = level_power_experiment(cfg, threads=3)
        assert seq.rows == par.rows

    def test_rates_are_valid_fractions(self):
        report = level_power_experiment(self.small_config())
        for row in report.rows:
            assert 0.0 <= row.rate <= 1.0

    def test_config_validation(self):
        with pytest.raises(ValueError, match="replicates"):
            self.small_config(replicates=0)
        with pytest.raises(ValueError, match="exceed"):
            self.small_config(n=4, q=3)
        with pytest.raises(ValueError, match="sd"):
            self.small_config(sd=0.0)


def test_band_rejects_crossed_bounds():
    grid = np.linspace(0, 1, 3)
    with pytest.raises(ValueError, match="lower > upper"):
        Band(
            eval_grid=grid,
            lower=np.array([0.0, 2.0, 0.0]),
            upper=np.array([1.0, 1.0, 1.0]),
            mu_hat=np.zeros(3),
            method="ED",
            level=0.9,
        )


def test_band_contains_is_pointwise_and_inclusive():
    grid = np.linspace(0, 1, 3)
    band = Band(
        eval_grid=grid,
        lower=np.zeros(3),
        upper=np.ones(3),
        mu_hat=np.full(3, 0.5),
        method="K",
        level=0.9,
    )
    assert band.contains(np.array([0.0, 1.0, 0.5]))
    assert not band.contains(np.array([0.0, 1.0 + 1e-9, 0.5]))
