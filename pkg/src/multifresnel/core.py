"""Domain types, parameter algebra, and closed-form reference values.

Everything here is a pure function of its inputs and safe for concurrent use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# Floor used when forming relative errors against a (near-)zero reference.
REL_ERR_FLOOR = 2.2250738585072014e-308  # smallest positive normal double


class Route(str, Enum):
    """How a verified quantity was computed."""

    DIRECT = "direct"
    OMEGA = "omega"
    ODE_EXTRACTION = "ode-extraction"
    CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class SpiralParams:
    """Physical parameters of the rolling-sphere problem.

    ``a`` is the curvature growth rate of the track (curvature = a*s), ``R``
    the sphere radius.  The dimensionless coupling is ``2/(a R**2)``; it is
    the only combination the limiting quantities depend on.  ``R = inf`` is
    permitted and represents the exact zero-coupling limit (1/R = 0).
    """

    a: float
    R: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"curvature rate a must be positive, got {self.a}")
        if not self.R > 0:
            raise ValueError(f"sphere radius R must be positive, got {self.R}")

    @property
    def inv_R(self) -> float:
        """1/R, exactly 0.0 for R = inf."""
        return 0.0 if math.isinf(self.R) else 1.0 / self.R

    @classmethod
    def from_coupling(cls, lam: float, a: float = 2.0) -> "SpiralParams":
        """Parameters realizing coupling ``lam``.

        The default a = 2 makes the raw phase a*s^2/2 coincide with the
        rescaled phase s^2, so integration windows are directly comparable
        across couplings.
        """
        if lam < 0:
            raise ValueError(f"coupling must be nonnegative, got {lam}")
        if lam == 0:
            return cls(a=a, R=math.inf)
        return cls(a=a, R=math.sqrt(2.0 / (a * lam)))


def lambda_of(params: SpiralParams) -> float:
    """Coupling 2/(a*R**2) of a parameter set."""
    return 2.0 * params.inv_R ** 2 / params.a


@dataclass(frozen=True)
class SO3State:
    """Point on the unit sphere; states produced by evolution satisfy
    x^2 + y^2 + z^2 = 1 within the integrator tolerance."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, v) -> "SO3State":
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def norm(self) -> float:
        return math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)


@dataclass(frozen=True)
class SpinorState:
    """Normalized pair of complex amplitudes, |a|^2 + |b|^2 = 1 within the
    integrator tolerance."""

    a_amp: complex
    b_amp: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.a_amp, self.b_amp], dtype=complex)

    @classmethod
    def from_array(cls, v) -> "SpinorState":
        return cls(complex(v[0]), complex(v[1]))

    def norm(self) -> float:
        return math.sqrt(abs(self.a_amp) ** 2 + abs(self.b_amp) ** 2)


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for the regularized oscillatory quadratures.

    eps_grid      damping parameters, strictly decreasing; integrals are
                  evaluated with weight exp(-eps*s^2) per variable and
                  extrapolated to eps -> 0
    s_max         infinite limits are truncated at s_max/sqrt(eps)
    delta_excise  guard radius around 0 for principal-value integrands
                  (protects 0/0 evaluation only; the combined integrand is
                  regular there)
    abs_tol       target absolute accuracy of delivered values
    rel_tol       target relative accuracy of delivered values
    extrap_order  polynomial order of the Richardson extrapolation in eps
    """

    eps_grid: tuple[float, ...] = (0.2, 0.1, 0.05, 0.025, 0.0125)
    s_max: float = 6.0
    delta_excise: float = 1e-8
    abs_tol: float = 1e-6
    rel_tol: float = 1e-6
    extrap_order: int = 4

    def __post_init__(self):
        if len(self.eps_grid) == 0:
            raise ValueError("eps_grid must be nonempty")
        if any(e <= 0 for e in self.eps_grid):
            raise ValueError("eps_grid entries must be positive")
        if any(a <= b for a, b in zip(self.eps_grid, self.eps_grid[1:])):
            raise ValueError("eps_grid must be strictly decreasing")
        if not self.s_max > 0:
            raise ValueError("s_max must be positive")
        if not 0 < self.delta_excise < self.s_max:
            raise ValueError("delta_excise must lie in (0, s_max)")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.extrap_order < 0:
            raise ValueError("extrap_order must be nonnegative")


@dataclass(frozen=True)
class VerificationRecord:
    """One verified quantity: computed value vs. reference, with errors."""

    name: str
    computed: "float | complex"
    reference: "float | complex"
    abs_err: float
    rel_err: float
    route: Route
    runtime_seconds: float

    def __post_init__(self):
        if self.abs_err < 0 or self.rel_err < 0 or self.runtime_seconds < 0:
            raise ValueError("errors and runtime must be nonnegative")

    @classmethod
    def create(cls, name, computed, reference, route, runtime_seconds=0.0):
        abs_err = abs(computed - reference)
        rel_err = abs_err / max(abs(reference), REL_ERR_FLOOR)
        return cls(name=name, computed=computed, reference=reference,
                   abs_err=abs_err, rel_err=rel_err, route=Route(route),
                   runtime_seconds=float(runtime_seconds))


def closed_form_In(n: int) -> float:
    """Reference value (2/n!) * (pi/4)**n of the ordered 2n-fold cosine integral.

    Raises OverflowError once n! exceeds the double range (n > 170).
    """
    if n < 1 or n != int(n):
        raise ValueError(f"n must be a positive integer, got {n}")
    return 2.0 * (math.pi / 4.0) ** n / float(math.factorial(n))


def closed_form_Jn(n: int) -> float:
    """Reference value (1/n!) * (pi/2)**n of the ordered alternating-phase integral."""
    if n < 1 or n != int(n):
        raise ValueError(f"n must be a positive integer, got {n}")
    return (math.pi / 2.0) ** n / float(math.factorial(n))


def closed_form_z_infinity(lam: float) -> float:
    """Limiting vertical coordinate 2*exp(-pi*lam/4) - 1 at coupling lam."""
    if lam < 0:
        raise ValueError(f"coupling must be nonnegative, got {lam}")
    return 2.0 * math.exp(-math.pi * lam / 4.0) - 1.0
