"""Numerical verification of ordered multi-dimensional Fresnel-type
integrals by independent routes: direct regularized quadrature, reduced
frequency-space principal-value integrals, and series-coefficient
extraction from two equivalent ODE evolutions linked by the Hopf map."""

from .core import (
    QuadratureConfig,
    Route,
    SO3State,
    SpinorState,
    SpiralParams,
    VerificationRecord,
    closed_form_In,
    closed_form_Jn,
    closed_form_z_infinity,
    lambda_of,
)
from .evolution import (
    BlockStructureReport,
    OdeConfig,
    Trajectory,
    a_infinity_magnitude,
    block_structure_check,
    boundary_matched_spinor,
    hopf_map,
    integrate,
    rhs_so3,
    rhs_spinor,
    z_infinity,
)
from .extraction import (
    CoefficientFit,
    chebyshev_lambda_grid,
    extract_coefficients,
    sample_z_curve,
    verification_report,
)
from .quadrature import (
    DampedResult,
    I2_omega,
    I3_reduced,
    PhiValue,
    damped_integral,
    direct_In,
    direct_Jn,
    dirichlet_integral,
    extrapolate_to_zero,
    fresnel_full_line,
    phi,
    pv_halfline,
    zeta2_check,
)

__version__ = "0.1.0"
