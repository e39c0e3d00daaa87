import numpy as np
import pytest

from multifresnel import OdeConfig, QuadratureConfig, SpiralParams, integrate


@pytest.fixture(scope="session")
def qcfg():
    return QuadratureConfig()


@pytest.fixture(scope="session")
def ode_cfg():
    return OdeConfig()


@pytest.fixture(scope="session", autouse=True)
def warm_stepper():
    # trigger numba compilation once so per-test timings stay meaningful
    cfg = OdeConfig(s_start=-1.0, s_end=1.0)
    integrate("spinor", np.array([1.0, 0.0]), SpiralParams(a=2.0, R=1.0), cfg)
    integrate("so3", np.array([0.0, 0.0, 1.0]), SpiralParams(a=2.0, R=1.0), cfg)
