import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multifresnel import (damped_integral, dirichlet_integral,
                          extrapolate_to_zero, fresnel_full_line)
from multifresnel.quadrature import DampedResult

SQRT_PI = 1.772453850905516
SQRT_HALF_PI = 1.2533141373155003
# Re/Im of sqrt(pi/(eps - i)) at eps = 1 (mpmath, 30 digits); this is the
# analytic value of the damped full-line integral of exp(i s^2)
DAMPED_COS_EPS1 = 1.3769963318531534
DAMPED_SIN_EPS1 = 0.57037055599157926
# analytic damped Fresnel cosine samples Re sqrt(pi/(eps - i)) on the grid
FRESNEL_SAMPLES = [
    (0.2, 1.3573388450172202),
    (0.1, 1.3109253038208316),
    (0.05, 1.2834252848279691),
    (0.025, 1.2686808356429159),
]


def gaussian_family(eps: float) -> complex:
    """Independent oracle: full-line integral of exp(i s^2 - eps s^2)."""
    return cmath.sqrt(math.pi / complex(eps, -1.0))


class TestDampedIntegral:
    def test_oscillatory_gaussian(self, qcfg):
        r = damped_integral(lambda s: math.cos(s * s), (-math.inf, math.inf),
                            1.0, qcfg)
        assert r.value == pytest.approx(DAMPED_COS_EPS1, abs=1e-10)
        assert r.converged

    def test_pure_gaussian(self, qcfg):
        r = damped_integral(lambda s: 1.0, (-math.inf, math.inf), 1.0, qcfg)
        assert r.value == pytest.approx(SQRT_PI, abs=1e-12)

    def test_odd_integrand_vanishes(self, qcfg):
        for eps in (0.3, 1.0, 2.5):
            r = damped_integral(lambda s: s, (-math.inf, math.inf), eps, qcfg)
            assert abs(r.value) < 1e-12

    def test_complex_integrand(self, qcfg):
        r = damped_integral(lambda s: cmath.exp(1j * s * s),
                            (-math.inf, math.inf), 1.0, qcfg,
                            complex_valued=True)
        assert r.value.real == pytest.approx(DAMPED_COS_EPS1, abs=1e-10)
        assert r.value.imag == pytest.approx(DAMPED_SIN_EPS1, abs=1e-10)

    def test_regulator_consistency_on_grid(self, qcfg):
        # every eps on the grid must match the analytic Gaussian family
        for eps in qcfg.eps_grid:
            r = damped_integral(lambda s: math.cos(s * s),
                                (-math.inf, math.inf), eps, qcfg)
            ref = gaussian_family(eps).real
            assert abs(r.value - ref) <= max(r.est_error, 1e-10)

    def test_invalid_inputs(self, qcfg):
        with pytest.raises(ValueError):
            damped_integral(lambda s: 1.0, (-1.0, 1.0), 0.0, qcfg)
        with pytest.raises(ValueError):
            damped_integral(lambda s: 1.0, (1.0, -1.0), 1.0, qcfg)
        with pytest.raises(ValueError):
            DampedResult(eps=1.0, value=0.0, est_error=-1.0)

    def test_non_convergence_flagged(self, qcfg):
        # infinitely oscillatory near the origin: the subdivision budget is
        # exhausted and the result must carry the non-convergence flag
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            r = damped_integral(lambda s: math.sin(1.0 / (abs(s) + 1e-14)),
                                (0.0, 1.0), 1.0, qcfg)
        assert not r.converged


class TestExtrapolateToZero:
    def test_exact_linear_model(self):
        samples = [(0.2, 1.2), (0.1, 1.1), (0.05, 1.05)]
        limit, _ = extrapolate_to_zero(samples, order=1)
        assert limit == pytest.approx(1.0, abs=1e-13)

    def test_fresnel_samples(self):
        # frozen analytic samples; the degree-3 interpolation of the sample
        # function has error |f''''(xi)/4!| * prod(eps_i) ~ 1.2e-5 at 0, which
        # bounds what any polynomial extrapolation from these four samples can
        # achieve (the default five-sample grid at order 4 reaches 5.6e-8)
        limit, unc = extrapolate_to_zero(FRESNEL_SAMPLES, order=3)
        assert limit == pytest.approx(SQRT_HALF_PI, abs=2e-5)
        assert unc < 1e-3

    def test_constant_samples(self):
        samples = [(0.4, 2.5), (0.2, 2.5), (0.1, 2.5)]
        limit, unc = extrapolate_to_zero(samples, order=2)
        assert limit == 2.5
        assert unc == 0.0

    def test_order_zero_takes_last_sample(self):
        limit, unc = extrapolate_to_zero([(0.2, 3.0), (0.1, 2.0)], order=0)
        assert limit == 2.0
        assert unc == 1.0

    def test_insufficient_samples(self):
        with pytest.raises(ValueError):
            extrapolate_to_zero([(0.1, 1.0)], order=1)

    def test_bad_eps_sequence(self):
        with pytest.raises(ValueError):
            extrapolate_to_zero([(0.1, 1.0), (0.2, 2.0)], order=1)
        with pytest.raises(ValueError):
            extrapolate_to_zero([(0.1, 1.0), (-0.05, 2.0)], order=1)

    @given(coeffs=st.lists(st.floats(min_value=-3, max_value=3), min_size=1,
                           max_size=4))
    @settings(max_examples=50, deadline=None)
    def test_recovers_polynomial_constant_term(self, coeffs):
        # polynomial data of degree <= order is extrapolated exactly
        order = len(coeffs)
        eps = [0.4 / 2 ** k for k in range(order + 2)]
        def p(e):
            return 1.75 + sum(c * e ** (k + 1) for k, c in enumerate(coeffs))
        limit, _ = extrapolate_to_zero([(e, p(e)) for e in eps], order=order)
        assert limit == pytest.approx(1.75, abs=1e-9)


class TestFresnel:
    def test_cos(self, qcfg):
        value = fresnel_full_line("cos", qcfg)
        assert value == pytest.approx(SQRT_HALF_PI, rel=1e-6)

    def test_sin(self, qcfg):
        value = fresnel_full_line("sin", qcfg)
        assert value == pytest.approx(SQRT_HALF_PI, rel=1e-6)

    def test_cos_sin_consistency(self, qcfg):
        c = fresnel_full_line("cos", qcfg)
        s = fresnel_full_line("sin", qcfg)
        assert abs(c - s) <= 2 * qcfg.abs_tol

    def test_invalid_kind(self, qcfg):
        with pytest.raises(ValueError):
            fresnel_full_line("tan", qcfg)

    def test_halving_eps_improves_extrapolation(self, qcfg):
        # convergence-order check: halving every eps must cut the error at
        # least in half for extrapolation order >= 1
        def error_for(grid, order):
            samples = [(e, gaussian_family(e).real) for e in grid]
            limit, _ = extrapolate_to_zero(samples, order)
            return abs(limit - SQRT_HALF_PI)

        grid = qcfg.eps_grid
        halved = tuple(e / 2 for e in grid)
        for order in (1, 2, 3):
            assert error_for(halved, order) <= error_for(grid, order) / 2


class TestDirichlet:
    def test_value(self, qcfg):
        value = dirichlet_integral(qcfg)
        assert value == pytest.approx(math.pi / 2, rel=1e-7)

    def test_integrand_regular_at_origin(self):
        from multifresnel.quadrature import _sinc
        assert _sinc(1e-12) == pytest.approx(1.0, abs=1e-15)
        assert _sinc(0.5) == pytest.approx(math.sin(0.5) / 0.5, rel=1e-14)

    def test_scaled_variable_oracle(self, qcfg):
        # int_0^inf sin(2 w^2)/w dw = pi/4 via the substitution u = 2 w^2,
        # which reduces it to half the Dirichlet integral
        def f(w):
            return math.sin(2 * w * w) / w if w > 1e-12 else 2.0 * w

        samples = []
        for eps in qcfg.eps_grid:
            r = damped_integral(f, (0.0, math.inf), eps, qcfg)
            samples.append((eps, r.value))
        limit, _ = extrapolate_to_zero(samples, qcfg.extrap_order)
        assert limit == pytest.approx(math.pi / 4, abs=1e-6)
