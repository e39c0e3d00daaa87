"""Adaptive Dormand-Prince 5(4) core for the two oscillatory systems.

The phase a*s^2/2 has instantaneous frequency a*|s|, so steps are capped at
c/(1 + a*|s|) to prevent aliasing at large |s|; inside the cap a standard
PI controller drives the embedded error estimate.  States are complex
arrays (the rotation system simply keeps zero imaginary parts) so one
compiled kernel serves both systems.  Steps land exactly on the requested
sample points, which keeps recorded trajectories deterministic.
"""
import math

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_STEP_BUDGET = 2

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (9017 / 3168, -355 / 33, 46732 / 5247,
                                49 / 176, -5103 / 18656)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                                -17253 / 339200, 22 / 525, -1 / 40)

SYSTEM_SO3 = 0
SYSTEM_SPINOR = 1


@njit(cache=True, nogil=True)
def _rhs(system, s, y, a, inv_r, out):
    psi = 0.5 * a * s * s
    sn = math.sin(psi)
    cs = math.cos(psi)
    if system == SYSTEM_SO3:
        out[0] = -sn * inv_r * y[2]
        out[1] = cs * inv_r * y[2]
        out[2] = (sn * y[0] - cs * y[1]) * inv_r
    else:
        phase = complex(cs, -sn)          # e^{-i psi}
        k = 0.5j * inv_r
        out[0] = k * phase * y[1]
        out[1] = k * phase.conjugate() * y[0]


@njit(cache=True, nogil=True)
def integrate_core(system, y0, s_start, s_end, a, inv_r, rel_tol, abs_tol,
                   max_step_coeff, max_steps, samples, out_states):
    """Integrate from s_start to s_end recording states at ``samples``.

    ``samples`` must be sorted in the direction of integration and lie
    within [s_start, s_end]; recorded states are written to ``out_states``.
    Returns (status, n_steps, n_rejected, max_norm_drift, s_reached, y).
    """
    n = y0.shape[0]
    y = y0.copy()
    k1 = np.zeros(n, np.complex128)
    k2 = np.zeros(n, np.complex128)
    k3 = np.zeros(n, np.complex128)
    k4 = np.zeros(n, np.complex128)
    k5 = np.zeros(n, np.complex128)
    k6 = np.zeros(n, np.complex128)
    k7 = np.zeros(n, np.complex128)
    ytmp = np.zeros(n, np.complex128)
    ynew = np.zeros(n, np.complex128)

    direction = 1.0 if s_end >= s_start else -1.0
    s = s_start
    h = min(1e-4, max_step_coeff / (1.0 + a * abs(s)))
    _rhs(system, s, y, a, inv_r, k1)
    err_prev = 1.0
    n_steps = 0
    n_rejected = 0
    i_sample = 0
    m = samples.shape[0]
    max_drift = 0.0

    while True:
        while i_sample < m and direction * (samples[i_sample] - s) <= 0.0:
            for j in range(n):
                out_states[i_sample, j] = y[j]
            i_sample += 1
        if direction * (s_end - s) <= 0.0:
            break

        h_cap = max_step_coeff / (1.0 + a * abs(s))
        if h > h_cap:
            h = h_cap
        target = samples[i_sample] if i_sample < m else s_end
        dist = direction * (target - s)
        if dist <= 1e-14 * (1.0 + abs(s)):
            s = target   # within roundoff of the event: snap, do not step
            continue
        clamped = dist < h
        h_try = dist if clamped else h
        if not clamped and h_try < 1e-14 * (1.0 + abs(s)):
            return STATUS_STEP_UNDERFLOW, n_steps, n_rejected, max_drift, s, y
        hs = direction * h_try

        for j in range(n):
            ytmp[j] = y[j] + hs * _A21 * k1[j]
        _rhs(system, s + _C2 * hs, ytmp, a, inv_r, k2)
        for j in range(n):
            ytmp[j] = y[j] + hs * (_A31 * k1[j] + _A32 * k2[j])
        _rhs(system, s + _C3 * hs, ytmp, a, inv_r, k3)
        for j in range(n):
            ytmp[j] = y[j] + hs * (_A41 * k1[j] + _A42 * k2[j] + _A43 * k3[j])
        _rhs(system, s + _C4 * hs, ytmp, a, inv_r, k4)
        for j in range(n):
            ytmp[j] = y[j] + hs * (_A51 * k1[j] + _A52 * k2[j]
                                   + _A53 * k3[j] + _A54 * k4[j])
        _rhs(system, s + _C5 * hs, ytmp, a, inv_r, k5)
        for j in range(n):
            ytmp[j] = y[j] + hs * (_A61 * k1[j] + _A62 * k2[j] + _A63 * k3[j]
                                   + _A64 * k4[j] + _A65 * k5[j])
        _rhs(system, s + hs, ytmp, a, inv_r, k6)
        for j in range(n):
            ynew[j] = y[j] + hs * (_B1 * k1[j] + _B3 * k3[j] + _B4 * k4[j]
                                   + _B5 * k5[j] + _B6 * k6[j])
        _rhs(system, s + hs, ynew, a, inv_r, k7)

        err_sq = 0.0
        for j in range(n):
            e = hs * (_E1 * k1[j] + _E3 * k3[j] + _E4 * k4[j]
                      + _E5 * k5[j] + _E6 * k6[j] + _E7 * k7[j])
            scale = abs_tol + rel_tol * max(abs(y[j]), abs(ynew[j]))
            q = abs(e) / scale
            err_sq += q * q
        err = math.sqrt(err_sq / n)

        if err <= 1.0:
            s = target if clamped else s + hs
            for j in range(n):
                y[j] = ynew[j]
                k1[j] = k7[j]   # FSAL
            n_steps += 1
            norm_sq = 0.0
            for j in range(n):
                norm_sq += abs(y[j]) ** 2
            drift = abs(math.sqrt(norm_sq) - 1.0)
            if drift > max_drift:
                max_drift = drift
            if err == 0.0:
                err = 1e-10
            fac = 0.9 * err ** -0.14 * err_prev ** 0.08
            if fac > 5.0:
                fac = 5.0
            if fac < 0.2:
                fac = 0.2
            err_prev = err
            h = h_try * fac
        else:
            n_rejected += 1
            fac = 0.9 * err ** -0.2
            if fac < 0.2:
                fac = 0.2
            h = h_try * fac
        if n_steps + n_rejected > max_steps:
            return STATUS_STEP_BUDGET, n_steps, n_rejected, max_drift, s, y

    return STATUS_OK, n_steps, n_rejected, max_drift, s, y
