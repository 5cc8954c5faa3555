from __future__ import annotations

from fractions import Fraction as F

import pytest

from olgbubble import CobbDouglas, Economy, LogSavings
from olgbubble.closedform import XSequenceSpec

# Frozen oracle values, computed once with 40-digit mpmath arithmetic by a
# standalone script that shares no code with the package.
ORACLE = {
    "unbounded_d1": 0.6267446371001843554,
    "unbounded_k200": 1.762759372452982424e-25,
    "unbounded_p200": 3.143851470217377184e-17,
    "unbounded_d400_root": 0.9128251524610941098,
    "k_bubbly_fig2": 0.6495190528383289851,
    "p_bubbly_fig2": 0.2165063509461096617,
    "one_plus_k200": 0.6495190520296686976,
    "one_plus_p200": 0.2165063513144993481,
    "rho_plus_S200": 3.999999999999999874,
    # pure bubble, fig2 economy, k0 = 1: the saddle path has x_t = 1 for all t,
    # so p0 = A alpha k0**alpha (1/rho - 1) = 3/4 * (4/3 - 1)
    "pbar_fig2": 0.25,
}


def fig1_economy(**kw) -> Economy:
    return Economy(1, CobbDouglas(6, F(2, 3)), LogSavings(F(1, 2)), **kw)


def fig2_economy(**kw) -> Economy:
    return Economy(1, CobbDouglas(F(9, 4), F(1, 3)), LogSavings(F(2, 3)), **kw)


def unbounded_spec() -> XSequenceSpec:
    return XSequenceSpec("geometric_unbounded", 5, F(11, 10), 6, F(2, 3), F(1, 2))


def one_plus_spec() -> XSequenceSpec:
    return XSequenceSpec("one_plus_geometric", 1, F(9, 10), F(9, 4), F(1, 3), F(2, 3))


def rho_plus_spec() -> XSequenceSpec:
    return XSequenceSpec("rho_plus_geometric", 1, None, F(9, 4), F(1, 3), F(2, 3))


@pytest.fixture
def fig1():
    return fig1_economy()


@pytest.fixture
def fig2():
    return fig2_economy()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
