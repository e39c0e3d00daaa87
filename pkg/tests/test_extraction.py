import math

import numpy as np
import pytest

from multifresnel import (OdeConfig, chebyshev_lambda_grid, closed_form_In,
                          closed_form_z_infinity, extract_coefficients,
                          sample_z_curve, verification_report)
from multifresnel.core import Route

Z_INF_LAM_HALF = 0.35046381331155443


def synthetic_samples(count=24, lo=0.02, hi=0.6):
    grid = chebyshev_lambda_grid(lo, hi, count)
    return [(float(l), closed_form_z_infinity(float(l)), 0.0) for l in grid]


@pytest.fixture(scope="module")
def ode_fit():
    # shared moderate-cost real-data fit: 16 points, degree 7
    cfg = OdeConfig(s_start=-200.0, s_end=200.0, rel_tol=1e-11, abs_tol=1e-11)
    grid = chebyshev_lambda_grid(0.02, 0.6, 16)
    samples = sample_z_curve(grid, cfg, max_workers=4)
    return samples, extract_coefficients(samples, 7)


class TestChebyshevGrid:
    def test_shape_and_range(self):
        grid = chebyshev_lambda_grid(0.02, 0.6, 12)
        assert len(grid) == 12
        assert np.all(np.diff(grid) > 0)
        assert grid[0] >= 0.02 and grid[-1] <= 0.6

    def test_validation(self):
        with pytest.raises(ValueError):
            chebyshev_lambda_grid(0.5, 0.1, 8)


class TestSampleZCurve:
    def test_zero_coupling_grid(self, ode_cfg):
        assert sample_z_curve([0.0], ode_cfg) == [(0.0, 1.0, 0.0)]

    def test_single_point(self, ode_cfg):
        [(lam, value, unc)] = sample_z_curve([0.5], ode_cfg)
        assert lam == 0.5
        assert value == pytest.approx(Z_INF_LAM_HALF, abs=2e-3)
        assert 0 < unc < 1e-2

    def test_grid_shape_contract(self, ode_cfg):
        grid = chebyshev_lambda_grid(0.02, 0.6, 12)
        out = sample_z_curve(grid, ode_cfg, max_workers=4)
        assert len(out) == 12
        assert all(math.isfinite(u) and u > 0 for _, _, u in out)

    def test_parallel_results_identical(self, ode_cfg):
        grid = [0.1, 0.3]
        assert sample_z_curve(grid, ode_cfg, max_workers=1) == \
            sample_z_curve(grid, ode_cfg, max_workers=4)

    def test_validation(self, ode_cfg):
        with pytest.raises(ValueError):
            sample_z_curve([0.3, 0.1], ode_cfg)
        with pytest.raises(ValueError):
            sample_z_curve([0.1, 0.9], ode_cfg)
        with pytest.raises(ValueError):
            sample_z_curve([-0.1, 0.1], ode_cfg)


class TestExtractCoefficients:
    def test_synthetic_oracle_high_degree(self):
        # degree high enough that series truncation bias sits below roundoff
        fit = extract_coefficients(synthetic_samples(), 10)
        for n in range(1, 6):
            assert abs(fit.coefficients[n - 1] - closed_form_In(n)) <= 1e-8
        # low orders are recovered to near machine relative accuracy
        for n in range(1, 5):
            assert fit.coefficients[n - 1] == pytest.approx(
                closed_form_In(n), rel=1e-8)
        assert not fit.ill_conditioned

    def test_degree_four_fit_is_truncation_bias_limited(self):
        # with N=4 the dropped tail sum_{k>=5} (-lam)^k I_k biases the fit;
        # the coefficient error is bounded by the design pseudoinverse acting
        # on that remainder (alternating series bound per sample)
        samples = synthetic_samples()
        fit = extract_coefficients(samples, 4)
        lams = np.array([s[0] for s in samples])
        design = np.column_stack([lams ** n for n in range(1, 5)])
        pinv = np.linalg.pinv(design)
        remainder_bound = lams ** 5 * closed_form_In(5)
        for n in range(1, 5):
            bound = float(np.abs(pinv[n - 1]) @ remainder_bound)
            err = abs(fit.coefficients[n - 1] - closed_form_In(n))
            assert err <= bound

    def test_low_degree_small_coupling(self):
        # N=1 on a small-coupling grid recovers I_1 within the linearization
        # error, which is dominated by the dropped lam^2 I_2 term
        grid = [0.01, 0.02, 0.03, 0.04]
        samples = [(l, closed_form_z_infinity(l), 0.0) for l in grid]
        fit = extract_coefficients(samples, 1)
        bound = max(grid) * closed_form_In(2)  # O(lam^2) I_2 over a lam^1 basis
        assert abs(fit.coefficients[0] - closed_form_In(1)) <= bound

    def test_constant_curve_gives_zero_coefficients(self):
        samples = [(l, 1.0, 0.0) for l in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)]
        fit = extract_coefficients(samples, 2)
        assert np.allclose(fit.coefficients, 0.0, atol=1e-12)

    def test_polynomial_round_trip(self):
        # exact polynomial data is recovered to 1e-10 of the coefficient
        # scale whenever the design is well conditioned
        rng = np.random.default_rng(77)
        grid = chebyshev_lambda_grid(0.05, 0.8, 20)
        for _ in range(20):
            deg = int(rng.integers(1, 7))
            coeffs = rng.uniform(-2, 2, size=deg)
            z = 1.0 + sum(c * grid ** (n + 1) for n, c in enumerate(coeffs))
            samples = [(float(l), float(v), 0.0) for l, v in zip(grid, z)]
            fit = extract_coefficients(samples, deg)
            if fit.condition_number <= 1e8:
                recovered = fit.raw_coefficients
                assert np.abs(recovered - coeffs).max() <= \
                    1e-10 * max(np.abs(coeffs).max(), 1.0)

    def test_sign_pattern_on_real_data(self, ode_fit):
        # every I_n is positive, so the raw series coefficients alternate
        _, fit = ode_fit
        for n in range(1, 6):
            assert fit.coefficients[n - 1] > 0
            assert (-1.0) ** n * fit.raw_coefficients[n - 1] > 0

    def test_real_data_accuracy(self, ode_fit):
        _, fit = ode_fit
        for n in range(1, 6):
            assert fit.coefficients[n - 1] == pytest.approx(
                closed_form_In(n), rel=1e-2)

    def test_grid_jitter_stability(self, ode_fit):
        samples, fit = ode_fit
        rng = np.random.default_rng(2024)
        jitter = 1.0 + 0.01 * rng.uniform(-1, 1, size=len(samples))
        jittered = sorted((float(l * j), v, u)
                          for (l, v, u), j in zip(samples, jitter))
        refit = extract_coefficients(jittered, fit.degree)
        for n in range(1, 4):
            delta = abs(refit.coefficients[n - 1] - fit.coefficients[n - 1])
            assert delta <= 10.0 * fit.standard_errors[n - 1]

    def test_ill_conditioning_flagged(self):
        grid = np.linspace(0.02, 0.6, 40)
        samples = [(float(l), closed_form_z_infinity(float(l)), 0.0)
                   for l in grid]
        fit = extract_coefficients(samples, 16)
        assert fit.ill_conditioned
        assert fit.condition_number > 1e10

    def test_preconditions(self):
        samples = synthetic_samples(10)
        with pytest.raises(ValueError):
            extract_coefficients(samples, 12)   # needs >= 26 samples
        with pytest.raises(ValueError):
            extract_coefficients(samples, -1)

    def test_rank_deficiency_rejected(self):
        samples = [(0.3, closed_form_z_infinity(0.3), 0.0)] * 8
        with pytest.raises(ValueError, match="rank-deficient"):
            extract_coefficients(samples, 2)

    def test_weighted_fallback_on_zero_uncertainty(self):
        # mixed zero/nonzero uncertainties fall back to the unweighted path
        samples = [(l, closed_form_z_infinity(l), 0.0 if i == 0 else 1e-3)
                   for i, l in enumerate((0.1, 0.2, 0.3, 0.4, 0.5, 0.6))]
        fit = extract_coefficients(samples, 2)
        assert math.isfinite(fit.coefficients[0])


class TestVerificationReport:
    def test_synthetic_report(self):
        fit = extract_coefficients(synthetic_samples(), 10)
        records = verification_report(fit)
        assert len(records) == 10
        for rec in records[:4]:
            assert rec.rel_err <= 1e-8
            assert rec.route is Route.ODE_EXTRACTION

    def test_empty_fit_gives_empty_report(self):
        samples = [(l, 1.0, 0.0) for l in (0.1, 0.2)]
        fit = extract_coefficients(samples, 0)
        assert verification_report(fit) == []
