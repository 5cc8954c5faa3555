"""Exact equilibrium paths built from a chosen sequence ``x_t``.

With Cobb-Douglas production (full depreciation) and log utility, pick
``x_t`` and set

    k_{t+1} = A alpha k_t**alpha / (G x_t)
    p_t     = A alpha k_t**alpha (1/rho - 1/x_t)
    d_{t+1} = (A alpha / rho) k_{t+1}**alpha (x_t + rho/x_{t+1} - 1 - rho)

with ``rho = alpha / (beta (1 - alpha))``. The result is an equilibrium of
the economy paying ``d_t`` whenever ``x_t > rho`` and
``x_t + rho/x_{t+1} >= 1 + rho`` for all ``t``. These paths serve as
oracles for the forward simulator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

import numpy as np

from . import _prec
from ._prec import num, working_precision
from .dynamics import (
    Trajectory,
    shooting_bits,
    simulate,
    trajectory_from_path,
)
from .primitives import (
    CDPlusLog,
    CobbDouglas,
    Economy,
    LogSavings,
    SequenceDividends,
)

__all__ = [
    "FAMILIES",
    "XSequenceSpec",
    "ConstructionError",
    "ConstructedPath",
    "construct",
    "exponents",
    "exponent_sums",
    "ThetaPath",
    "construct_theta",
    "ThetaSearchError",
    "RoundTrip",
    "roundtrip",
    "THETA_GRID",
]

FAMILIES = ("geometric_unbounded", "one_plus_geometric", "rho_plus_geometric")
THETA_GRID = tuple(2**i for i in range(21))


class ConstructionError(ValueError):
    """The x-sequence violates a feasibility condition at ``index``."""

    def __init__(self, index: int, condition: str, detail: str = ""):
        self.index = index
        self.condition = condition
        msg = f"{condition} violated at t={index}"
        super().__init__(msg + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class XSequenceSpec:
    """A parametric family of x-sequences on a log-utility Cobb-Douglas economy.

    * ``geometric_unbounded``: ``x_t = C sigma**t`` (``C >= 1 + rho``, ``sigma > 1``)
    * ``one_plus_geometric``: ``x_t = 1 + C sigma**t`` (``C > 0``, ``rho < sigma < 1``)
    * ``rho_plus_geometric``: ``x_t = rho + C sigma**t`` (``C > 0``, ``sigma <= rho``;
      ``sigma`` defaults to ``rho``)

    Parameter restrictions are not enforced here; :func:`construct` checks
    the feasibility conditions date by date and reports the first failure.
    """

    family: str
    C: Real
    sigma: Real | None
    A: Real
    alpha: Real
    beta: Real
    G: Real = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.sigma is None:
            if self.family != "rho_plus_geometric":
                raise ValueError(f"family {self.family} needs sigma")
            object.__setattr__(self, "sigma", self.rho)
        if not (self.sigma > 0):
            raise ValueError("sigma must be positive")
        if not (0 < self.alpha < 1 and 0 < self.beta < 1 and self.A > 0 and self.G > 0):
            raise ValueError("need A > 0, G > 0 and alpha, beta in (0, 1)")

    @property
    def rho(self):
        return self.alpha / (self.beta * (1 - self.alpha))

    def economy(self, dividends=None, k0=1) -> Economy:
        econ = Economy(self.G, CobbDouglas(self.A, self.alpha), LogSavings(self.beta), k0=k0)
        return econ if dividends is None else econ.with_dividends(dividends)

    def declared_ratio(self):
        """``limsup d_t**(1/t)`` of the constructed dividends."""
        s, a = self.sigma, self.alpha
        if self.family == "geometric_unbounded":
            return float(s) ** ((1 - 2 * float(a)) / (1 - float(a)))
        if self.family == "one_plus_geometric":
            return s
        return s if s < self.rho else s * s

    def x_limit(self):
        return {"geometric_unbounded": math.inf, "one_plus_geometric": 1,
                "rho_plus_geometric": self.rho}[self.family]

    def k_limit(self) -> float:
        """Limit of ``k_t`` implied by ``x_t -> x_limit``."""
        xl = self.x_limit()
        if xl == math.inf:
            return 0.0
        a = float(self.alpha)
        return (float(self.A) * a / (float(self.G) * float(xl))) ** (1 / (1 - a))

    def at_precision(self, bits) -> "FamilyAlgebra":
        return FamilyAlgebra(self, bits)


class FamilyAlgebra:
    """Family formulas with parameters in the working number type.

    The excess ``x_t + rho/x_{t+1} - 1 - rho`` is evaluated in factored
    form so that its sign is exact and small values keep full accuracy.
    """

    def __init__(self, spec: XSequenceSpec, bits):
        self.spec = spec
        self.family = spec.family
        self.A, self.alpha, self.beta, self.G = (num(v, bits) for v in (spec.A, spec.alpha, spec.beta, spec.G))
        self.C = num(spec.C, bits)
        self.rho = self.alpha / (self.beta * (1 - self.alpha))
        self.sigma = self.rho if spec.sigma == spec.rho else num(spec.sigma, bits)

    def x(self, t):
        c, rho, st = self.C, self.rho, self.sigma**t
        if self.family == "geometric_unbounded":
            return c * st
        if self.family == "one_plus_geometric":
            return 1 + c * st
        return rho + c * st

    def log_x(self, t):
        if self.family == "geometric_unbounded":
            return _prec.log(self.C) + t * _prec.log(self.sigma)
        return _prec.log(self.x(t))

    def x_minus_rho(self, t):
        c, rho, st = self.C, self.rho, self.sigma**t
        if self.family == "geometric_unbounded":
            return c * st - rho
        if self.family == "one_plus_geometric":
            return (1 - rho) + c * st
        return c * st

    def excess(self, t):
        c, rho, s = self.C, self.rho, self.sigma
        st = s**t
        if self.family == "geometric_unbounded":
            return (c - 1 - rho) + c * (st - 1) + rho / (c * st * s)
        if self.family == "one_plus_geometric":
            nxt = 1 + c * st * s
            return c * st * (nxt - rho * s) / nxt
        nxt = rho + c * st * s
        return c * st * ((rho - s) + c * st * s) / nxt


@dataclass
class ConstructedPath:
    """Constructed ``(k_t, p_t, d_t)`` with the identities it was checked against.

    ``d[0]`` is a placeholder zero. ``log_k`` and ``log_d`` stay finite
    after the levels underflow. ``checks`` holds the largest scaled
    discrepancy of each cross-check.
    """

    spec: XSequenceSpec
    k0: Real
    T: int
    x: np.ndarray
    k: np.ndarray
    p: np.ndarray
    d: np.ndarray
    log_k: np.ndarray
    log_d: np.ndarray
    ratio: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    checks: dict = field(default_factory=dict)
    precision: int | None = None

    @property
    def rho(self):
        return self.spec.rho

    @property
    def p0(self):
        return self.p[0]

    def dividends(self) -> SequenceDividends:
        return SequenceDividends(tuple(self.d), declared_ratio=self.spec.declared_ratio(),
                                 source="constructed")

    def economy(self) -> Economy:
        return self.spec.economy(self.dividends(), k0=self.k0)

    def montrucchio_sum(self, T: int | None = None) -> float:
        """``sum_{t=1}^T d_t / p_t`` from the closed-form ratio."""
        T = self.T if T is None else T
        return float(sum(self.ratio[1: T + 1]))

    def growth_root(self, t: int) -> float:
        """``d_t**(1/t)`` evaluated in logs."""
        return math.exp(float(self.log_d[t]) / t)

    def trajectory(self) -> Trajectory:
        return trajectory_from_path(self.economy(), list(self.k), list(self.p), T=self.T,
                                    precision=self.precision, dividends=list(self.d))

    def to_csv(self, path_or_buf=None):
        return self.trajectory().to_csv(path_or_buf)

    def report(self) -> dict:
        return {
            "family": self.spec.family,
            "T": self.T,
            "rho": float(self.rho),
            "p0": float(self.p[0]),
            "k1": float(self.k[1]),
            "k_T": float(self.k[-1]),
            "p_T": float(self.p[-1]),
            "min_p": float(min(self.p)),
            "min_d": float(min(self.d[1:])),
            "montrucchio_sum": self.montrucchio_sum(),
            "declared_dividend_ratio": float(self.spec.declared_ratio()),
            "checks": {k: float(v) for k, v in self.checks.items()},
        }


def construct(spec: XSequenceSpec, k0: Real = 1, T: int = 200, *, precision: int | None = None,
              check_tol: float = 1e-10) -> ConstructedPath:
    """Build the path on dates ``0..T`` and cross-check it.

    Raises :class:`ConstructionError` at the first date where
    ``x_t > rho`` or ``x_t + rho/x_{t+1} >= 1 + rho`` fails, or when a
    cross-check exceeds ``check_tol``.
    """
    if T < 1:
        raise ValueError("T must be at least 1")
    if not (k0 > 0):
        raise ValueError("k0 must be positive")
    with working_precision(precision):
        wk = spec.at_precision(precision)
        A, alpha, G, rho = wk.A, wk.alpha, wk.G, wk.rho
        Aa = A * alpha
        log_c = _prec.log(Aa / G)
        k0w = num(k0, precision)

        xs, xm, ex = [], [], []
        for t in range(T + 1):
            xmr = wk.x_minus_rho(t)
            if not (xmr > 0):
                raise ConstructionError(t, "x_t > rho", f"x_t - rho = {float(xmr):.6g}")
            e = wk.excess(t)
            if e < 0:
                raise ConstructionError(t, "x_t + rho/x_{t+1} >= 1 + rho", f"excess = {float(e):.6g}")
            xs.append(wk.x(t))
            xm.append(xmr)
            ex.append(e)

        if precision is None:
            # log space keeps k finite long after k**alpha would underflow
            log_k = [math.log(float(k0))]
            for t in range(T):
                log_k.append(log_c + alpha * log_k[t] - wk.log_x(t))
            k = [math.exp(v) for v in log_k]
            ka = [math.exp(alpha * v) for v in log_k]
        else:
            exact = spec.alpha if isinstance(spec.alpha, Fraction) else None
            k, ka = [k0w], [_prec.rpow(k0w, alpha, exact)]
            for t in range(T):
                k.append(Aa * ka[t] / (G * xs[t]))
                ka.append(_prec.rpow(k[-1], alpha, exact))
            log_k = [_prec.flog(v) for v in k]
        # p_t = A alpha k^alpha (x - rho) / (rho x), free of cancellation
        p = [Aa * ka[t] * xm[t] / (rho * xs[t]) for t in range(T + 1)]
        zero = num(0, precision)
        d = [zero] + [Aa / rho * ka[t + 1] * ex[t] for t in range(T)]
        log_scale = _prec.flog(Aa / rho)
        log_d = [0.0] + [log_scale + float(alpha) * log_k[t + 1] + _prec.flog(ex[t]) for t in range(T)]
        ratio = [zero] + [ex[t - 1] * xs[t] / xm[t] for t in range(1, T + 1)]

        checks = {}
        # closed-form capital, in float logs:
        # log k_{t+1} = (1-a^{t+1})/(1-a) log c + a^{t+1} log k0 - sum_s a^s log x_{t-s}
        af, lc = float(alpha), float(log_c)
        if wk.family == "geometric_unbounded":
            lx = _prec.flog(wk.C) + np.arange(T + 1) * _prec.flog(wk.sigma)
        else:
            lx = np.array([_prec.flog(v) for v in xs])
        apow = af ** np.arange(T + 2)
        lk = np.array(log_k)
        worst = 0.0
        for t in range(T):
            closed = (1 - apow[t + 1]) / (1 - af) * lc + apow[t + 1] * lk[0]
            closed -= float(np.dot(apow[: t + 1], lx[t::-1]))
            worst = max(worst, abs(closed - lk[t + 1]))
        checks["capital_closed_form"] = worst  # abs error in log k ~ relative error in k

        worst = 0.0
        for t in range(T):
            carried = Aa / G * ka[t + 1] / k[t + 1] * p[t]
            rec = carried - p[t + 1]
            scale = max(abs(float(carried)), abs(float(d[t + 1])), 1e-300)
            worst = max(worst, float(abs(rec - d[t + 1])) / scale)
        checks["dividend_recursion"] = worst

        worst = 0.0
        for t in range(1, T + 1):
            if p[t] > 0 and ratio[t] > 0:
                worst = max(worst, float(abs(d[t] / p[t] - ratio[t]) / ratio[t]))
        checks["ratio_identity"] = worst

        worst = 0.0
        for t in range(T):
            lhs = G * k[t + 1] + p[t]
            rhs = wk.beta * A * (1 - alpha) * ka[t]
            worst = max(worst, float(abs(lhs - rhs) / rhs))
        checks["market_clearing"] = worst

        for name, val in checks.items():
            if not (val <= check_tol):
                raise ConstructionError(-1, name, f"cross-check discrepancy {val:.3g}")

        dtype = float if precision is None else object
        arr = lambda xs_: np.array(xs_, dtype=dtype)  # noqa: E731
        mu, nu = zip(*(exponents(spec.alpha, t) for t in range(1, T + 1)))
    return ConstructedPath(
        spec=spec, k0=k0, T=T, x=arr(xs), k=arr(k), p=arr(p), d=arr(d),
        log_k=np.array(log_k, dtype=float), log_d=np.array(log_d, dtype=float),
        ratio=arr(ratio), mu=np.array([float(m) for m in mu]), nu=np.array([float(n) for n in nu]),
        checks=checks, precision=precision,
    )


def exact_start(spec: XSequenceSpec) -> tuple[Fraction, Fraction]:
    """``(k_1, p_0)`` as exact rationals for ``k_0 = 1``.

    Requires rational ``A, alpha, beta, G, C``; ``x_0`` is then rational for
    every family.
    """
    A, a, b, G, C = (Fraction(v) for v in (spec.A, spec.alpha, spec.beta, spec.G, spec.C))
    rho = a / (b * (1 - a))
    x0 = {"geometric_unbounded": C, "one_plus_geometric": 1 + C, "rho_plus_geometric": rho + C}[spec.family]
    k1 = A * a / (G * x0)
    p0 = A * a / rho - G * k1
    return k1, p0


# --------------------------------------------------------------------------
# Exponent algebra
# --------------------------------------------------------------------------


def exponents(alpha, t: int):
    """Closed forms of ``mu_t = 1 - sum_{s=1}^t alpha**s`` and
    ``nu_t = (t-1) - sum_{s=1}^t alpha**s (t-s)``.

    Exact for rational ``alpha``.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    a = alpha
    mu = 1 - a * (1 - a**t) / (1 - a)
    nu = (1 - 2 * a) / (1 - a) * (t - 1) + (a / (1 - a)) ** 2 * (1 - a ** (t - 1))
    return mu, nu


def exponent_sums(alpha, t: int):
    """The defining finite sums behind :func:`exponents`."""
    if t < 1:
        raise ValueError("t must be at least 1")
    mu = 1 - sum(alpha**s for s in range(1, t + 1))
    nu = (t - 1) - sum(alpha**s * (t - s) for s in range(1, t + 1))
    return mu, nu


# --------------------------------------------------------------------------
# Theta-variant: positive steady-state capital with the same dividend growth
# --------------------------------------------------------------------------


class ThetaSearchError(ValueError):
    def __init__(self, probed: list):
        self.probed = probed
        super().__init__("no theta on the grid gives f'(k*) below the target rate; probed "
                         + ", ".join(f"theta={t:g}: f'={r:.4g}" for t, r in probed))


@dataclass
class ThetaPath:
    """Price and dividend sequences for ``f(k) = A k**alpha + theta k log(1 + 1/k)``.

    The capital path is the one of ``base``; ``t0`` is the first date from
    which every constructed dividend through the horizon is positive, and
    :meth:`economy` starts the economy there.
    """

    base: ConstructedPath
    theta: Real
    t0: int
    k: np.ndarray
    p: np.ndarray
    d: np.ndarray
    k_star: float
    R_star: float
    probed: list
    precision: int | None = None

    @property
    def technology(self) -> CDPlusLog:
        s = self.base.spec
        return CDPlusLog(s.A, s.alpha, self.theta)

    def declared_ratio(self):
        return self.base.spec.declared_ratio()

    def economy(self, t0: int | None = None) -> Economy:
        """The economy that starts at date ``t0`` with the constructed dividends."""
        t0 = self.t0 if t0 is None else t0
        s = self.base.spec
        divs = SequenceDividends(tuple(self.d[t0:]), declared_ratio=self.declared_ratio(),
                                 source="constructed")
        return Economy(s.G, self.technology, LogSavings(s.beta), divs, k0=self.k[t0])

    def shifted(self, t0: int | None = None):
        """``(economy, k, p)`` on the shifted time axis."""
        t0 = self.t0 if t0 is None else t0
        return self.economy(t0), self.k[t0:], self.p[t0:]

    def growth_root(self, t: int) -> float:
        return math.exp(_prec.log(self.d[t]) / t) if self.d[t] > 0 else 0.0


def theta_steady_state(spec: XSequenceSpec, theta) -> tuple[float, float]:
    """``k*`` solving ``G = beta (A (1-alpha) k**(alpha-1) + theta/(1+k))`` and ``f'(k*)``."""
    A, a, b, G = (float(v) for v in (spec.A, spec.alpha, spec.beta, spec.G))
    th = float(theta)

    def excess(k):  # increasing in k
        return G - b * (A * (1 - a) * k ** (a - 1) + th / (1 + k))

    hi = 1.0
    while excess(hi) < 0:
        hi *= 2
    k_star = _prec.bisect(excess, _prec.K_PROBE, hi, rtol=1e-15, geometric=True)
    return k_star, float(CDPlusLog(A, a, th).fprime(k_star))


def construct_theta(base: ConstructedPath, theta: Real | None = None, t0: int | None = None, *,
                    target: float | None = None, grid=THETA_GRID) -> ThetaPath:
    """Graft the bounded ``theta k log(1 + 1/k)`` term onto an unbounded-family path.

    With ``theta=None`` the first grid value whose steady state satisfies
    ``f'(k*) < target`` is used; ``target`` defaults to the smaller of ``G``
    and the dividend growth rate, so the resulting economy has
    ``R < G_d < G``. ``t0=None`` searches for the first date after which all
    dividends are positive.
    """
    spec = base.spec
    if spec.family != "geometric_unbounded":
        raise ValueError("theta construction needs the geometric_unbounded family")
    if not (spec.alpha > Fraction(1, 2)):
        raise ValueError("theta construction needs alpha > 1/2")
    G = float(spec.G)
    if target is None:
        target = min(G, float(spec.declared_ratio()) * G)
    probed = []
    if theta is None:
        for th in grid:
            ks, R = theta_steady_state(spec, th)
            probed.append((th, R))
            if R < target:
                theta = th
                break
        else:
            raise ThetaSearchError(probed)
    ks, R = theta_steady_state(spec, theta) if theta else (math.nan, math.nan)
    if theta and not probed:
        probed.append((theta, R))

    bits = base.precision
    with working_precision(bits):
        th = num(theta, bits)
        beta, Gw = num(spec.beta, bits), num(spec.G, bits)
        tech = CDPlusLog(spec.A, spec.alpha, theta).at_precision(bits)
        k = list(base.k)
        p = list(base.p)
        d = list(base.d)
        share = [kk / (1 + kk) for kk in k]
        p_th = [p[t] + beta * th * share[t] for t in range(len(k))]
        d_th = [d[0]]
        for t in range(1, len(k)):
            hprime = _prec.log1p(1 / k[t]) - 1 / (1 + k[t])
            fprime = tech.A * tech.alpha * tech.ka(k[t]) / k[t] + th * hprime
            # split so the cancelling Cobb-Douglas part is replaced by d_t
            extra = th * hprime / Gw * p[t - 1] + beta * th * (
                fprime / Gw * share[t - 1] - share[t])
            d_th.append(d[t] + extra)
    T = len(k) - 1
    if t0 is None:
        t0 = T
        while t0 > 1 and d_th[t0 - 1] > 0:
            t0 -= 1
        if not (d_th[T] > 0):
            raise ConstructionError(T, "theta dividends positive at the horizon")
    else:
        bad = [t for t in range(max(t0, 1), T + 1) if not (d_th[t] > 0)]
        if bad:
            raise ConstructionError(bad[0], "theta dividends positive from t0 on")
    dtype = float if bits is None else object
    return ThetaPath(base=base, theta=theta, t0=t0, k=np.array(k, dtype=dtype),
                     p=np.array(p_th, dtype=dtype), d=np.array(d_th, dtype=dtype),
                     k_star=ks, R_star=R, probed=probed, precision=bits)


# --------------------------------------------------------------------------
# Round trip: simulate the constructed economy from the constructed price
# --------------------------------------------------------------------------


@dataclass
class RoundTrip:
    max_rel_k: float
    max_rel_p: float
    bits: int | None
    status: str
    steps: int
    attempts: list = field(default_factory=list)
    trajectory: Trajectory | None = field(default=None, repr=False, compare=False)

    @property
    def max_rel(self) -> float:
        return max(self.max_rel_k, self.max_rel_p)

    def passed(self, tol: float = 1e-10) -> bool:
        return self.status == "completed" and self.max_rel <= tol

    def to_dict(self) -> dict:
        return {"max_rel_k": self.max_rel_k, "max_rel_p": self.max_rel_p,
                "max_rel": self.max_rel, "precision_bits": self.bits,
                "status": self.status, "steps": self.steps, "attempts": self.attempts}


def _compare(traj: Trajectory, k, p) -> tuple[float, float]:
    n = traj.last
    with working_precision(traj.precision):
        rk = max((float(abs(traj.k[t] - k[t]) / abs(k[t])) for t in range(n + 1)), default=0.0)
        rp = max((float(abs(traj.p[t] - p[t]) / abs(p[t])) for t in range(n + 1) if p[t] != 0),
                 default=0.0)
    return rk, rp


def roundtrip(source, T: int | None = None, *, precision="auto", tol: float = 1e-10,
              max_attempts: int = 4) -> RoundTrip:
    """Simulate a constructed economy from its constructed ``p_0``.

    ``source`` is a :class:`ConstructedPath`, a :class:`ThetaPath` or an
    ``(XSequenceSpec, k0, T)`` tuple. ``precision="auto"`` sizes the MPFR
    precision from the path's error amplification and doubles it while the
    residual exceeds ``tol / 100``.
    """
    build = _builder(source)
    if precision is None or isinstance(precision, int):
        econ, k, p = build(precision)
        traj = simulate(econ, p[0], len(k) - 1, precision=precision)
        rk, rp = _compare(traj, k, p)
        return RoundTrip(rk, rp, precision, traj.status, traj.last, trajectory=traj)
    econ, k, p = build(None)
    bits = shooting_bits(econ, k, p)
    attempts = []
    for i in range(max_attempts):
        if i:
            bits *= 2
        econ, k, p = build(bits)
        traj = simulate(econ, p[0], len(k) - 1, precision=bits)
        rk, rp = _compare(traj, k, p)
        attempts.append({"bits": bits, "status": traj.status, "max_rel": max(rk, rp)})
        if traj.completed and max(rk, rp) <= tol / 100:
            break
    return RoundTrip(rk, rp, bits, traj.status, traj.last, attempts, traj)


def _builder(source):
    if isinstance(source, ThetaPath):
        th = source

        def build(bits):
            base = construct(th.base.spec, th.base.k0, th.base.T, precision=bits)
            tp = construct_theta(base, th.theta, th.t0)
            return tp.shifted()
        return build
    if isinstance(source, ConstructedPath):
        spec, k0, T = source.spec, source.k0, source.T
    else:
        spec, k0, T = source

    def build(bits):
        path = construct(spec, k0, T, precision=bits)
        return path.economy(), path.k, path.p
    return build
