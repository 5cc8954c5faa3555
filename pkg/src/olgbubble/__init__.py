"""Asset price bubbles in an overlapping generations economy with capital."""
from __future__ import annotations

from .primitives import (
    CDPlusLog,
    CobbDouglas,
    CRRASavings,
    DomainError,
    Economy,
    GeometricDividends,
    LogSavings,
    SeparableSavings,
    SequenceDividends,
    invert_marginal_product,
    no_dividends,
    p_of_k,
    savings,
    transition,
    wage,
)
from .dynamics import (
    Trajectory,
    bubbleless_steady_states,
    diamond_reference,
    dividend_growth_estimate,
    simulate,
)

__version__ = "0.1.0"
