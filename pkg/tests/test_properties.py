from __future__ import annotations

from fractions import Fraction as F

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from olgbubble import CobbDouglas, Economy, GeometricDividends, LogSavings, simulate, transition, wage
from olgbubble.closedform import exponent_sums, exponents
from olgbubble.equilibria import survival_status

from conftest import fig2_economy

alphas = st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=50)
units = st.floats(min_value=0.05, max_value=0.95)


@settings(max_examples=60, deadline=None)
@given(alpha=units, beta=units, A=st.floats(0.5, 10), k=st.floats(0.01, 5), share=st.floats(0, 0.98))
def test_transition_closed_form_agrees_with_bisection(alpha, beta, A, k, share):
    econ = Economy(1, CobbDouglas(A, alpha), LogSavings(beta))
    p = share * beta * float(wage(econ.technology, k))
    exact = transition(econ, k, p)
    numeric = transition(econ, k, p, method="bisect")
    assert exact is not None and numeric is not None
    assert abs(exact - numeric) <= 1e-12 * max(1.0, exact)


@settings(max_examples=40, deadline=None)
@given(alpha=units, beta=units, k=st.floats(0.01, 5), excess=st.floats(0, 2))
def test_transition_undefined_above_savings(alpha, beta, k, excess):
    econ = Economy(1, CobbDouglas(2, alpha), LogSavings(beta))
    p = beta * float(wage(econ.technology, k)) * (1 + excess)
    assert transition(econ, k, p) is None


@settings(max_examples=40, deadline=None)
@given(alpha=alphas, t=st.integers(1, 40))
def test_exponent_identities(alpha, t):
    mu, nu = exponents(alpha, t)
    assert (mu, nu) == exponent_sums(alpha, t)
    mu1, nu1 = exponents(alpha, t + 1)
    assert mu1 == mu - alpha ** (t + 1)
    assert nu1 == nu + mu


@settings(max_examples=25, deadline=None)
@given(a=st.floats(0.01, 0.24), b=st.floats(0.01, 0.24))
def test_capital_falls_with_initial_price(a, b):
    lo, hi = sorted((a, b))
    econ = fig2_economy()
    ka = simulate(econ, lo, 30).k
    kb = simulate(econ, hi, 30).k
    assert all(x >= y - 1e-15 for x, y in zip(ka[1:], kb[1:]))


@settings(max_examples=20, deadline=None)
@given(d0=st.floats(0, 0.01), gamma=st.floats(0, 0.99), T=st.integers(10, 120))
def test_survival_pattern_is_ordered(d0, gamma, T):
    econ = fig2_economy(dividends=GeometricDividends(d0, gamma))
    st_ = survival_status(econ, np.linspace(0, 0.75, 200), T)
    rank = {"fail_low": 0, "completed": 1, "fail_high": 2}
    codes = [rank[s] for s in st_]
    assert codes == sorted(codes)
