"""Production technologies, savings rules, dividend streams and the one-period map.

All quantities are detrended (divided by population ``G**t``). The central
object is the implicit transition ``x = g(k, p)`` solving

    G*x + p - s(w(k), f'(x)) = 0,

whose left-hand side is strictly increasing in ``x``.
"""
from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Callable, ClassVar, Sequence

from . import _prec
from ._prec import K_PROBE, bisect, log1p, num, rpow

__all__ = [
    "CobbDouglas",
    "CDPlusLog",
    "LogSavings",
    "SeparableSavings",
    "CRRASavings",
    "DividendStream",
    "SequenceDividends",
    "GeometricDividends",
    "no_dividends",
    "Economy",
    "DomainError",
    "wage",
    "invert_marginal_product",
    "savings",
    "transition",
    "transition_from_wage",
    "p_of_k",
]


class DomainError(ValueError):
    """Argument outside the domain of a model primitive."""


def _check_positive(name, value):
    if not (value > 0) or not math.isfinite(float(value)):
        raise ValueError(f"{name} must be a finite positive number, got {value!r}")


def _check_share(name, value):
    if not (0 < value < 1):
        raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


# --------------------------------------------------------------------------
# Production
# --------------------------------------------------------------------------


def _keep_exact(tech):
    if tech.alpha_exact is None and isinstance(tech.alpha, Fraction):
        object.__setattr__(tech, "alpha_exact", tech.alpha)


@dataclass(frozen=True)
class CobbDouglas:
    """``f(k) = A k**alpha + (1 - delta) k``."""

    A: Real
    alpha: Real
    delta: Real = 1
    # rational alpha kept through precision changes, for fast MPFR powers
    alpha_exact: Fraction | None = field(default=None, repr=False, compare=False)

    kind: ClassVar[str] = "cobb_douglas"

    def __post_init__(self):
        _check_positive("A", self.A)
        _check_share("alpha", self.alpha)
        if not (0 <= self.delta <= 1):
            raise ValueError(f"delta must lie in [0, 1], got {self.delta!r}")
        _keep_exact(self)

    def at_precision(self, bits):
        return CobbDouglas(num(self.A, bits), num(self.alpha, bits), num(self.delta, bits),
                           self.alpha_exact)

    def ka(self, k):
        """``k**alpha``."""
        return rpow(k, self.alpha, self.alpha_exact)

    def f(self, k):
        return self.A * self.ka(k) + (1 - self.delta) * k

    def fprime(self, k):
        return self.A * self.alpha * self.ka(k) / k + (1 - self.delta)

    def fsecond(self, k):
        return self.A * self.alpha * (self.alpha - 1) * k ** (self.alpha - 2)

    def wage(self, k):
        return self.A * (1 - self.alpha) * self.ka(k)

    def rates(self, k):
        """``(wage(k), fprime(k))`` sharing one power evaluation."""
        ka = self.ka(k)
        return self.A * (1 - self.alpha) * ka, self.A * self.alpha * ka / k + (1 - self.delta)

    @property
    def fprime_inf(self):
        return 1 - self.delta

    def params(self) -> dict:
        return {"technology": self.kind, "A": self.A, "alpha": self.alpha, "delta": self.delta}


@dataclass(frozen=True)
class CDPlusLog:
    """``f(k) = A k**alpha + theta * k log(1 + 1/k)``.

    The bounded term ``h(k) = k log(1 + 1/k)`` is increasing and concave with
    ``h(0) = 0``, ``h(inf) = 1`` and wage contribution ``k / (1 + k)``.
    """

    A: Real
    alpha: Real
    theta: Real = 0
    alpha_exact: Fraction | None = field(default=None, repr=False, compare=False)

    kind: ClassVar[str] = "cd_plus_log"

    def __post_init__(self):
        _check_positive("A", self.A)
        _check_share("alpha", self.alpha)
        if not (self.theta >= 0):
            raise ValueError(f"theta must be nonnegative, got {self.theta!r}")
        _keep_exact(self)

    def at_precision(self, bits):
        return CDPlusLog(num(self.A, bits), num(self.alpha, bits), num(self.theta, bits),
                         self.alpha_exact)

    def ka(self, k):
        """``k**alpha``."""
        return rpow(k, self.alpha, self.alpha_exact)

    def f(self, k):
        return self.A * self.ka(k) + self.theta * k * log1p(1 / k)

    def fprime(self, k):
        return self.A * self.alpha * self.ka(k) / k + self.theta * (log1p(1 / k) - 1 / (1 + k))

    def fsecond(self, k):
        return (self.A * self.alpha * (self.alpha - 1) * k ** (self.alpha - 2)
                - self.theta / (k * (1 + k) ** 2))

    def wage(self, k):
        return self.A * (1 - self.alpha) * self.ka(k) + self.theta * k / (1 + k)

    def rates(self, k):
        ka = self.ka(k)
        w = self.A * (1 - self.alpha) * ka + self.theta * k / (1 + k)
        return w, self.A * self.alpha * ka / k + self.theta * (log1p(1 / k) - 1 / (1 + k))

    @property
    def fprime_inf(self):
        return 0 * self.A

    def params(self) -> dict:
        return {"technology": self.kind, "A": self.A, "alpha": self.alpha, "theta": self.theta}


Technology = CobbDouglas | CDPlusLog


def wage(tech: Technology, k):
    """Detrended wage ``f(k) - k f'(k)``."""
    if not (k > 0):
        raise DomainError(f"capital must be positive, got {k!r}")
    return tech.wage(k)


def invert_marginal_product(tech: Technology, R):
    """The unique ``k`` with ``f'(k) = R``."""
    lo = _prec.probe_like(R)
    if not (tech.fprime_inf < R < tech.fprime(lo)):
        raise DomainError(
            f"R={R!r} outside the range of f' ({float(tech.fprime_inf)!r}, +inf)")
    hi = lo * 0 + 1
    while tech.fprime(hi) > R:
        hi = hi * 2
    return bisect(lambda k: R - tech.fprime(k), lo, hi, rtol=1e-16, geometric=True)


# --------------------------------------------------------------------------
# Savings
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LogSavings:
    """Utility ``(1 - beta) log c_y + beta log c_o``: saves ``beta * w``."""

    beta: Real

    kind: ClassVar[str] = "log"
    depends_on_rate: ClassVar[bool] = False

    def __post_init__(self):
        _check_share("beta", self.beta)

    def at_precision(self, bits):
        return LogSavings(num(self.beta, bits))

    def __call__(self, w, R):
        return self.beta * w

    def params(self) -> dict:
        return {"savings": self.kind, "beta": self.beta}


class _SeparableBase:
    depends_on_rate: ClassVar[bool] = True

    def __call__(self, w, R):
        # foc(s) = -u'(w - s) + R v'(R s) is decreasing in s, +inf at 0+, -inf at w-.
        def neg_foc(s):
            return self.u_prime(w - s) - R * self.v_prime(R * s)

        if _prec.is_mp(w):
            eps = w * 2 ** (-_prec.current_bits() + 2)
        else:
            eps = w * 2.0**-50
        lo, hi = w * K_PROBE, w - eps
        if neg_foc(lo) >= 0:
            return lo
        if neg_foc(hi) < 0:
            return hi
        return bisect(neg_foc, lo, hi, rtol=1e-15)

    def _check_gross_substitutes(self, grid=None):
        grid = grid or [10.0**e for e in range(-6, 7)]
        vals = [c * self.v_prime(c) for c in grid]
        if any(b < a * (1 - 1e-12) for a, b in zip(vals, vals[1:])):
            warnings.warn(
                "c*v'(c) is not increasing on the sample grid; savings may fail to be "
                "increasing in R and the transition may lose uniqueness",
                RuntimeWarning, stacklevel=3)


@dataclass(frozen=True, eq=False)
class SeparableSavings(_SeparableBase):
    """Additively separable utility given by its two marginal utilities.

    ``u_prime`` and ``v_prime`` must be positive, strictly decreasing and blow
    up at zero. They receive MPFR numbers in extended-precision runs.
    """

    u_prime: Callable
    v_prime: Callable
    name: str = "separable"

    kind: ClassVar[str] = "separable"

    def __post_init__(self):
        self._check_gross_substitutes()

    def at_precision(self, bits):
        return self

    def params(self) -> dict:
        return {"savings": self.kind, "name": self.name}


@dataclass(frozen=True)
class CRRASavings(_SeparableBase):
    """``u'(c) = (1 - beta) c**-gamma``, ``v'(c) = beta c**-gamma``.

    ``gamma = 1`` reproduces :class:`LogSavings` through the root-finder.
    """

    beta: Real
    gamma: Real = 1

    kind: ClassVar[str] = "crra"

    def __post_init__(self):
        _check_share("beta", self.beta)
        _check_positive("gamma", self.gamma)
        self._check_gross_substitutes()

    def at_precision(self, bits):
        return CRRASavings(num(self.beta, bits), num(self.gamma, bits))

    def u_prime(self, c):
        return (1 - self.beta) * c ** (-self.gamma)

    def v_prime(self, c):
        return self.beta * c ** (-self.gamma)

    def params(self) -> dict:
        return {"savings": self.kind, "beta": self.beta, "gamma": self.gamma}


SavingsRule = LogSavings | SeparableSavings | CRRASavings


def savings(rule: SavingsRule, w, R):
    """Optimal saving of a young agent with wage ``w`` facing gross return ``R``."""
    if not (w > 0 and R > 0):
        raise DomainError(f"savings needs w > 0 and R > 0, got w={w!r}, R={R!r}")
    return rule(w, R)


# --------------------------------------------------------------------------
# Dividends
# --------------------------------------------------------------------------


class DividendStream:
    """Detrended dividends ``d_t = D_t / G**t``.

    ``declared_ratio`` is the known value of ``limsup d_t**(1/t)``, i.e. the
    long-run dividend growth rate divided by ``G``; ``None`` when unknown.
    """

    declared_ratio: Real | None = None
    source: str = "explicit"

    def at(self, t: int):
        raise NotImplementedError

    def values(self, T: int, bits: int | None = None) -> list:
        """``[d_0, ..., d_T]`` in the working number type."""
        return [num(self.at(t), bits) for t in range(T + 1)]

    def is_zero(self) -> bool:
        return False


@dataclass(frozen=True)
class SequenceDividends(DividendStream):
    """Finite sequence ``d_0, d_1, ...`` continued by a zero or geometric tail."""

    values_: tuple
    tail: str = "zero"
    tail_ratio: Real = 0
    declared_ratio: Real | None = None
    source: str = "explicit"

    def __post_init__(self):
        if not self.values_:
            raise ValueError("dividend sequence is empty")
        if any(v < 0 for v in self.values_):
            raise ValueError("dividends must be nonnegative")
        if self.tail not in ("zero", "geometric"):
            raise ValueError(f"tail must be 'zero' or 'geometric', got {self.tail!r}")
        if self.tail_ratio < 0:
            raise ValueError("tail_ratio must be nonnegative")

    @classmethod
    def of(cls, values: Sequence, **kw) -> "SequenceDividends":
        return cls(tuple(values), **kw)

    def at(self, t):
        n = len(self.values_)
        if t < n:
            return self.values_[t]
        if self.tail == "zero":
            return 0 * self.values_[-1]
        return self.values_[-1] * self.tail_ratio ** (t - n + 1)

    def is_zero(self):
        return all(v == 0 for v in self.values_) and (self.tail == "zero" or self.values_[-1] == 0)

    def shifted(self, t0: int) -> "SequenceDividends":
        """The stream as seen by an economy that starts at date ``t0``."""
        return dataclasses.replace(self, values_=self.values_[t0:])


@dataclass(frozen=True)
class GeometricDividends(DividendStream):
    """``d_t = d0 * gamma**t``; the long-run growth rate is exactly ``gamma * G``."""

    d0: Real
    gamma: Real
    source: str = "geometric"

    def __post_init__(self):
        if self.d0 < 0 or self.gamma < 0:
            raise ValueError("geometric dividends need d0 >= 0 and gamma >= 0")

    @property
    def declared_ratio(self):
        return 0 if self.d0 == 0 else self.gamma

    def at(self, t):
        return self.d0 * self.gamma**t

    def is_zero(self):
        return self.d0 == 0


def no_dividends() -> GeometricDividends:
    """Pure bubble: the asset never pays anything."""
    return GeometricDividends(0, 0, source="none")


# --------------------------------------------------------------------------
# Economy and the transition map
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Economy:
    G: Real
    technology: Technology
    savings: SavingsRule
    dividends: DividendStream = field(default_factory=no_dividends)
    k0: Real = 1

    def __post_init__(self):
        _check_positive("G", self.G)
        _check_positive("k0", self.k0)
        if not (self.technology.fprime_inf < self.G):
            raise ValueError("need f'(inf) < G so that detrended capital stays bounded")

    def at_precision(self, bits: int | None) -> "Economy":
        """Copy with every scalar parameter in the working number type."""
        return Economy(
            num(self.G, bits),
            self.technology.at_precision(bits),
            self.savings.at_precision(bits),
            self.dividends,
            num(self.k0, bits),
        )

    def with_dividends(self, dividends: DividendStream) -> "Economy":
        return dataclasses.replace(self, dividends=dividends)

    def with_k0(self, k0) -> "Economy":
        return dataclasses.replace(self, k0=k0)

    def transition(self, k, p, method: str = "auto"):
        return transition(self, k, p, method)

    def p_of_k(self, k):
        return p_of_k(self, k)

    def params(self) -> dict:
        out = {"G": self.G, "k0": self.k0}
        out.update(self.technology.params())
        out.update(self.savings.params())
        return out


def transition(econ: Economy, k, p, method: str = "auto"):
    """Next-period capital ``g(k, p)``, or ``None`` when ``(k, p)`` is outside dom g.

    ``method="auto"`` uses the exact solution when saving does not react to
    the interest rate; ``"bisect"`` always root-solves the market-clearing
    equation.
    """
    if not (k > 0):
        raise DomainError(f"capital must be positive, got {k!r}")
    return transition_from_wage(econ, econ.technology.wage(k), p, method, like=k)


def transition_from_wage(econ: Economy, w, p, method: str = "auto", like=None):
    """:func:`transition` when the wage ``w(k)`` is already known."""
    G = econ.G
    rule = econ.savings
    if method == "auto" and not rule.depends_on_rate:
        x = (rule(w, 1) - p) / G
        return x if x > 0 else None
    if method not in ("auto", "bisect"):
        raise ValueError(f"unknown method {method!r}")

    f1 = econ.technology.fprime

    def excess(x):
        return G * x + p - rule(w, f1(x))

    lo = _prec.probe_like(w if like is None else like)
    if excess(lo) >= 0:
        return None
    hi = w / G
    return bisect(excess, lo, hi, rtol=1e-13, geometric=True)


def p_of_k(econ: Economy, k):
    """Asset price that keeps capital stationary at ``k``."""
    if not (k > 0):
        raise DomainError(f"capital must be positive, got {k!r}")
    tech = econ.technology
    return econ.savings(tech.wage(k), tech.fprime(k)) - econ.G * k
