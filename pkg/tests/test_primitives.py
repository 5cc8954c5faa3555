from __future__ import annotations

import math
import warnings
from fractions import Fraction as F

import numpy as np
import pytest

from olgbubble import (
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
from olgbubble._prec import bisect, num, parse_real, working_precision


def test_cobb_douglas_derivatives_match_finite_differences():
    tech = CobbDouglas(2.0, 0.3, 0.4)
    for k in (0.1, 1.0, 7.0):
        h = 1e-6 * k
        assert tech.fprime(k) == pytest.approx((tech.f(k + h) - tech.f(k - h)) / (2 * h), rel=1e-7)
        assert tech.fsecond(k) == pytest.approx((tech.fprime(k + h) - tech.fprime(k - h)) / (2 * h), rel=1e-6)
        assert tech.wage(k) == pytest.approx(tech.f(k) - k * tech.fprime(k), rel=1e-12)


def test_cd_plus_log_wage_and_derivatives():
    tech = CDPlusLog(2.25, 1 / 3, 5.0)
    for k in (0.01, 0.5, 3.0, 200.0):
        h = 1e-6 * k
        assert tech.fprime(k) == pytest.approx((tech.f(k + h) - tech.f(k - h)) / (2 * h), rel=1e-7)
        assert tech.fsecond(k) == pytest.approx((tech.fprime(k + h) - tech.fprime(k - h)) / (2 * h), rel=1e-5)
        assert tech.wage(k) == pytest.approx(tech.f(k) - k * tech.fprime(k), rel=1e-10)
        w, R = tech.rates(k)
        assert (w, R) == pytest.approx((tech.wage(k), tech.fprime(k)), rel=1e-14)


def test_theta_zero_reduces_to_cobb_douglas():
    a, b = CDPlusLog(6, 2 / 3, 0), CobbDouglas(6, 2 / 3)
    for k in (0.2, 1.0, 4.0):
        assert a.f(k) == b.f(k) and a.fprime(k) == b.fprime(k) and a.wage(k) == b.wage(k)


@pytest.mark.parametrize("bad", [dict(A=-1, alpha=0.3), dict(A=1, alpha=1.0), dict(A=1, alpha=0.3, delta=2)])
def test_technology_validation(bad):
    with pytest.raises(ValueError):
        CobbDouglas(**bad)


def test_wage_domain():
    with pytest.raises(DomainError):
        wage(CobbDouglas(1, 0.5), 0.0)


def test_invert_marginal_product_roundtrip():
    tech = CobbDouglas(F(9, 4), F(1, 3))
    k = invert_marginal_product(tech, 1.0)
    assert k == pytest.approx(0.75**1.5, rel=1e-14)
    with pytest.raises(DomainError):
        invert_marginal_product(CobbDouglas(1, 0.5, 0.5), 0.4)  # below f'(inf) = 0.5


def test_log_savings_and_crra_gamma_one_agree():
    log_rule, crra = LogSavings(0.4), CRRASavings(0.4, 1.0)
    for w, R in [(1.0, 0.5), (2.5, 3.0), (0.01, 1.0)]:
        assert crra(w, R) == pytest.approx(log_rule(w, R), rel=1e-12)
    with pytest.raises(DomainError):
        savings(log_rule, -1.0, 1.0)


def test_crra_savings_first_order_condition():
    rule = CRRASavings(0.5, 0.5)
    w, R = 2.0, 1.3
    s = rule(w, R)
    assert rule.u_prime(w - s) == pytest.approx(R * rule.v_prime(R * s), rel=1e-10)
    # gamma < 1: gross substitutes, saving increases with R
    assert rule(w, 1.5) > rule(w, 1.0)


def test_separable_savings_warns_without_gross_substitutes():
    with pytest.warns(RuntimeWarning):
        SeparableSavings(lambda c: c**-1.0, lambda c: 1.0 / (c**3 + c**0.5), name="odd")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        SeparableSavings(lambda c: 1 / c, lambda c: 0.5 / c)


def test_dividend_streams():
    geo = GeometricDividends(0.5, 0.9)
    assert geo.at(3) == pytest.approx(0.5 * 0.9**3)
    assert geo.declared_ratio == 0.9
    assert no_dividends().is_zero() and no_dividends().declared_ratio == 0
    seq = SequenceDividends.of([0, 1, 2], tail="geometric", tail_ratio=0.5)
    assert seq.values(5) == [0, 1, 2, 1.0, 0.5, 0.25]
    assert seq.shifted(1).values(2) == [1, 2, 1.0]
    with pytest.raises(ValueError):
        SequenceDividends.of([1, -1])


def test_economy_validation():
    with pytest.raises(ValueError):
        Economy(-1, CobbDouglas(1, 0.5), LogSavings(0.5))
    with pytest.raises(ValueError):
        Economy(0.5, CobbDouglas(1, 0.5, 0.2), LogSavings(0.5))  # f'(inf) = 0.8 >= G


def test_transition_closed_form_and_domain(fig1):
    k, p = 1.0, 0.2
    assert transition(fig1, k, p) == pytest.approx(0.8, rel=1e-15)
    assert transition(fig1, k, p, "bisect") == pytest.approx(0.8, rel=1e-12)
    # beta A (1 - alpha) k**alpha = 1 at k = 1
    assert transition(fig1, 1.0, 1.0) is None
    assert transition(fig1, 1.0, 1.0, "bisect") is None
    assert transition(fig1, 1.0, 1.0 - 1e-9) is not None


def test_transition_bisect_with_rate_dependent_savings():
    econ = Economy(1.02, CobbDouglas(3, 0.3), CRRASavings(0.45, 0.7))
    k, p = 0.8, 0.1
    x = transition(econ, k, p)
    w = econ.technology.wage(k)
    assert econ.G * x + p == pytest.approx(econ.savings(w, econ.technology.fprime(x)), rel=1e-11)


def test_p_of_k_is_stationary_price(fig2):
    k = 0.8
    assert transition(fig2, k, p_of_k(fig2, k)) == pytest.approx(k, rel=1e-14)


def test_extended_precision_economy():
    econ = Economy(1, CobbDouglas(6, F(2, 3)), LogSavings(F(1, 2)))
    with working_precision(300):
        e = econ.at_precision(300)
        x = transition(e, e.k0, num(F(1, 5), 300))
        assert abs(x - num(F(4, 5), 300)) < 1e-85


def test_bisect_and_parse_real():
    root = bisect(lambda x: x * x - 2, 0.0, 2.0, rtol=1e-15)
    assert root == pytest.approx(math.sqrt(2), rel=1e-14)
    assert parse_real("2/3") == F(2, 3)
    assert parse_real("0.9") == F(9, 10)
    assert parse_real("1e-8") == pytest.approx(1e-8)
    assert isinstance(parse_real("1e-8"), float)


def test_number_types_are_consistent():
    tech = CobbDouglas(F(9, 4), F(1, 3)).at_precision(None)
    assert isinstance(tech.A, float)
    assert np.isfinite(tech.fprime(1e-300))


def test_rational_power_matches_general_power():
    from fractions import Fraction as F

    from olgbubble._prec import num, rpow, working_precision

    with working_precision(400):
        for q in (F(2, 3), F(1, 3), F(-1, 3), F(9, 10)):
            for x in (F(1, 7), F(5, 2), F(10**-30)):
                xm = num(x, 400)
                fast, slow = rpow(xm, num(q, 400), q), xm ** num(q, 400)
                assert abs(fast - slow) / slow < num(2, 400) ** -390
    assert rpow(2.0, 0.5, F(1, 2)) == 2.0**0.5


def test_precision_change_keeps_exact_alpha():
    from fractions import Fraction as F

    from olgbubble import CobbDouglas

    assert CobbDouglas(6, F(2, 3)).at_precision(300).alpha_exact == F(2, 3)
    assert CobbDouglas(6, 2 / 3).at_precision(300).alpha_exact is None
