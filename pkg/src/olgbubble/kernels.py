"""Kernel selection: compiled Cython core when importable, Python otherwise."""
from __future__ import annotations

from .primitives import CDPlusLog, CobbDouglas, Economy, LogSavings

try:
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    from . import _kernels_py as _impl

    BACKEND = "python"

shoot = _impl.shoot
survival = _impl.survival

FAIL_CODES = {0: "completed", 1: "fail_low", 2: "fail_high"}


def kernel_params(econ: Economy):
    """``(tech, A, alpha, par, beta, G)`` for economies the kernels cover, else ``None``."""
    if not isinstance(econ.savings, LogSavings):
        return None
    tech = econ.technology
    if isinstance(tech, CobbDouglas):
        code, par = 0, tech.delta
    elif isinstance(tech, CDPlusLog):
        code, par = 1, tech.theta
    else:
        return None
    return (code, float(tech.A), float(tech.alpha), float(par),
            float(econ.savings.beta), float(econ.G))
