import math

import pytest

from multifresnel import (damped_integral, direct_In, direct_Jn,
                          extrapolate_to_zero)
from multifresnel.quadrature import CostGateError, ordered_phase_integral

PI_HALF = 1.5707963267948966
PI_SQ_16 = 0.61685027506808491
PI_SQ_8 = 1.2337005501361698


def damped_ordered_pair_oracle(eps: float) -> float:
    """Closed form of the damped ordered two-fold integral: the integrand is
    swap-symmetric, so it equals half the full-square value
    |int exp(i s^2 - eps s^2) ds|^2 / 2 = (pi/2) / sqrt(1 + eps^2)."""
    return 0.5 * math.pi / math.sqrt(1.0 + eps * eps)


class TestOrderedChain:
    def test_pair_matches_analytic_oracle_per_eps(self, qcfg):
        # validates the cumulative panel engine at every damping, not only
        # in the limit
        for eps in qcfg.eps_grid:
            val = ordered_phase_integral([+1, -1], eps, qcfg)
            assert val.real == pytest.approx(damped_ordered_pair_oracle(eps),
                                             abs=1e-12)

    def test_conjugate_pair_is_conjugate(self, qcfg):
        a = ordered_phase_integral([+1, -1, -1, +1], 0.05, qcfg)
        b = ordered_phase_integral([-1, +1, +1, -1], 0.05, qcfg)
        assert a == pytest.approx(b.conjugate(), abs=1e-13)


class TestDirectIn:
    def test_i1(self, qcfg):
        value = direct_In(1, qcfg)
        assert value == pytest.approx(PI_HALF, abs=1e-6)
        assert value.uncertainty < 1e-4

    def test_i2(self, qcfg):
        value = direct_In(2, qcfg)
        assert value == pytest.approx(PI_SQ_16, rel=1e-2)
        # the nested-cumulative evaluation does far better than the gate
        assert value == pytest.approx(PI_SQ_16, abs=1e-4)

    def test_unordered_square_is_twice_i1(self, qcfg):
        # swap symmetry: the unordered integral of cos(s1^2 - s2^2) over the
        # full plane factorizes into line integrals and equals 2 I_1 = pi
        samples = []
        for eps in qcfg.eps_grid:
            c = damped_integral(lambda s: math.cos(s * s),
                                (-math.inf, math.inf), eps, qcfg).value
            s = damped_integral(lambda s: math.sin(s * s),
                                (-math.inf, math.inf), eps, qcfg).value
            samples.append((eps, c * c + s * s))
        full, _ = extrapolate_to_zero(samples, qcfg.extrap_order)
        assert full == pytest.approx(math.pi, abs=5e-6)
        assert full == pytest.approx(2 * float(direct_In(1, qcfg)), abs=5e-6)

    @pytest.mark.parametrize("n", [0, 3, 4])
    def test_cost_gate(self, qcfg, n):
        with pytest.raises(CostGateError):
            direct_In(n, qcfg)


class TestDirectJn:
    def test_j1(self, qcfg):
        value = direct_Jn(1, qcfg)
        assert value.real == pytest.approx(PI_HALF, abs=1e-5)
        assert abs(value.imag) < 1e-6

    def test_j2(self, qcfg):
        value = direct_Jn(2, qcfg)
        assert value.real == pytest.approx(PI_SQ_8, rel=1e-3)
        assert abs(value.imag) < 1e-6

    def test_j1_real_part_matches_ordered_oracle_per_eps(self, qcfg):
        # Re J_1(eps) has the same closed form as the damped ordered cosine
        # pair; the imaginary part carries all the eps dependence left over
        for eps in qcfg.eps_grid:
            val = ordered_phase_integral([-1, +1], eps, qcfg)
            assert val.real == pytest.approx(damped_ordered_pair_oracle(eps),
                                             abs=1e-12)

    def test_cost_gate(self, qcfg):
        with pytest.raises(CostGateError):
            direct_Jn(3, qcfg)
