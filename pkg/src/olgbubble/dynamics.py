"""Forward simulation of the equilibrium system and steady-state analysis.

Given ``k_0`` and an initial price ``p_0`` the equilibrium path is pinned
down by

    k_{t+1} = g(k_t, p_t)
    p_{t+1} = f'(k_{t+1}) / G * p_t - d_{t+1}

so every candidate ``p_0`` either survives (prices stay nonnegative and the
transition stays defined) or fails low/high at some date.
"""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _prec, kernels
from ._prec import num, working_precision
from .primitives import (
    DividendStream,
    DomainError,
    Economy,
    invert_marginal_product,
    p_of_k,
    transition,
    transition_from_wage,
)

__all__ = [
    "Trajectory",
    "simulate",
    "trajectory_from_path",
    "SteadyStateReport",
    "bubbleless_steady_states",
    "DiamondReference",
    "diamond_reference",
    "GrowthEstimate",
    "dividend_growth_estimate",
    "shooting_bits",
    "no_arbitrage_residual",
    "present_value_residual",
    "market_clearing_residual",
    "price_recursion_residual",
    "LOW_TOL",
]

LOW_TOL = 1e-12
CSV_COLUMNS = ("t", "k", "p", "R", "w", "d", "q", "v", "b")


@dataclass
class Trajectory:
    """Per-period record of a (possibly truncated) equilibrium candidate.

    Arrays hold float64, or MPFR objects for extended-precision runs; use
    :meth:`as_float` for plotting and I/O. ``status`` is ``"completed"``,
    ``"fail_low"`` or ``"fail_high"``; ``fail_date`` is the date at which the
    price went negative (fail_low) or the transition became undefined
    (fail_high).
    """

    G: float
    T: int
    k: np.ndarray
    p: np.ndarray
    R: np.ndarray
    w: np.ndarray
    d: np.ndarray
    q: np.ndarray
    v: np.ndarray
    b: np.ndarray
    status: str = "completed"
    fail_date: int | None = None
    precision: int | None = None
    v_tail_bound: np.ndarray | None = None
    p0: float | None = None

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    @property
    def t(self) -> np.ndarray:
        return np.arange(len(self.k))

    @property
    def last(self) -> int:
        return len(self.k) - 1

    def as_float(self) -> "Trajectory":
        if self.precision is None:
            return self
        conv = {name: np.array([float(x) for x in getattr(self, name)], dtype=float)
                for name in ("k", "p", "R", "w", "d", "q", "v", "b")}
        tail = None if self.v_tail_bound is None else np.array(
            [float(x) for x in self.v_tail_bound], dtype=float)
        return Trajectory(G=float(self.G), T=self.T, status=self.status, fail_date=self.fail_date,
                          precision=None, v_tail_bound=tail, p0=self.p0, **conv)

    def summary(self, tol: float = 1e-4) -> dict:
        f = self.as_float()
        n = f.last
        G = f.G
        return {
            "status": f.status,
            "T": f.T,
            "steps": n,
            "fail_date": f.fail_date,
            "precision_bits": self.precision,
            "p0": _jsonable(f.p[0]),
            "k_T": _jsonable(f.k[n]),
            "p_T": _jsonable(f.p[n]),
            "R_T": _jsonable(f.R[n]),
            "flags": {
                "prices_positive": bool(np.all(f.p > 0)),
                "k_vanishing": bool(f.k[n] <= 1e-6),
                "R_near_G": bool(abs(f.R[n] - G) <= tol * max(1.0, G)),
                "p_vanishing": bool(f.p[n] <= tol),
                "fundamental_tail_bounded": self.v_tail_bound is not None,
                # a truncated fundamental above the price rules the candidate out as an equilibrium
                "bubble_nonnegative": bool(np.all(f.b >= -1e-9 * np.maximum(1.0, np.abs(f.p)))),
            },
        }

    def to_csv(self, path_or_buf=None) -> str | None:
        """Write ``t,k,p,R,w,d,q,v,b`` with 17 significant digits."""
        f = self.as_float()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for t in range(f.last + 1):
            writer.writerow([t] + [format(float(getattr(f, c)[t]), ".17g") for c in CSV_COLUMNS[1:]])
        text = buf.getvalue()
        if path_or_buf is None:
            return text
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            with open(path_or_buf, "w", newline="", encoding="utf-8") as fh:
                fh.write(text)
        return None

    def summary_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def _jsonable(x):
    x = float(x)
    return x if math.isfinite(x) else None


def read_trajectory_csv(path) -> dict[str, np.ndarray]:
    """Columns of a trajectory CSV as float arrays."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {name: np.array([float(r[i]) for r in body]) for i, name in enumerate(header)}
    cols["t"] = cols["t"].astype(int)
    return cols


# --------------------------------------------------------------------------
# Simulation
# --------------------------------------------------------------------------


def simulate(econ: Economy, p0, T: int, *, precision: int | None = None,
             method: str = "auto", low_tol: float = LOW_TOL,
             use_kernel: bool = True) -> Trajectory:
    """Shoot forward from ``(k_0, p_0)`` for ``T`` periods.

    Parameters
    ----------
    precision
        ``None`` for float64, otherwise the MPFR working precision in bits.
        Equilibrium paths are saddle-like, so float64 loses them after a few
        dozen periods in some economies; see :func:`shooting_bits`.
    method
        Passed to :func:`~olgbubble.primitives.transition`.
    use_kernel
        Allow the compiled float64 kernel for log-savings economies.
    """
    if T < 1:
        raise ValueError("T must be at least 1")
    if p0 < 0:
        raise ValueError("p0 must be nonnegative")
    params = kernels.kernel_params(econ) if precision is None else None
    if params is not None and use_kernel and method == "auto":
        d = np.asarray(econ.dividends.values(T), dtype=float)
        k_out = np.empty(T + 1)
        p_out = np.empty(T + 1)
        code, t_end = kernels.shoot(*params, float(econ.k0), float(p0), d, T, k_out, p_out, low_tol)
        status = kernels.FAIL_CODES[code]
        fail_date = None if code == 0 else (t_end + 1 if code == 1 else t_end)
        return trajectory_from_path(econ, k_out[: t_end + 1], p_out[: t_end + 1], T=T,
                                    status=status, fail_date=fail_date, p0=float(p0))

    with working_precision(precision):
        ep = econ.at_precision(precision)
        d = econ.dividends.values(T, precision)
        tech = ep.technology
        k, p = ep.k0, num(p0, precision)
        w, R = tech.rates(k)
        ks, ps, ws, Rs = [k], [p], [w], [R]
        status, fail_date = "completed", None
        G = ep.G
        for t in range(T):
            x = transition_from_wage(ep, w, p, method, like=k)
            if x is None:
                status, fail_date = "fail_high", t
                break
            w, R = tech.rates(x)
            pn = R / G * p - d[t + 1]
            if pn < -low_tol:
                status, fail_date = "fail_low", t + 1
                break
            k, p = x, pn
            ks.append(k)
            ps.append(p)
            ws.append(w)
            Rs.append(R)
        return trajectory_from_path(ep, ks, ps, T=T, status=status, fail_date=fail_date,
                                    precision=precision, p0=float(p0), dividends=d,
                                    rates=(Rs, ws))


def trajectory_from_path(econ: Economy, k, p, *, T: int | None = None, status: str = "completed",
                         fail_date=None, precision: int | None = None, p0=None,
                         dividends=None, rates=None) -> Trajectory:
    """Fill rates, wages, discount factors and the fundamental/bubble split.

    The fundamental value is truncated at the last recorded date:
    ``v_t = G / R_{t+1} * (v_{t+1} + d_{t+1})`` with ``v_n = 0``, so ``v``
    is a lower bound and ``b = p - v`` an upper bound. A geometric bound on
    the truncation error is attached when the tail interest rates exceed
    both ``G`` and the declared dividend growth rate.
    """
    n = len(k) - 1
    with working_precision(precision):
        ep = econ.at_precision(precision)
        G = ep.G
        tech = ep.technology
        d = dividends if dividends is not None else econ.dividends.values(n, precision)
        d = list(d[: n + 1])
        kk = [num(x, precision) for x in k]
        pp = [num(x, precision) for x in p]
        if rates is not None:
            R, w = list(rates[0]), list(rates[1])
        else:
            w, R = map(list, zip(*(tech.rates(x) for x in kk)))
        q = [num(1, precision)]
        for t in range(1, n + 1):
            q.append(q[-1] / R[t])
        v = [num(0, precision)] * (n + 1)
        for t in range(n - 1, -1, -1):
            v[t] = G / R[t + 1] * (v[t + 1] + d[t + 1])
        b = [pp[t] - v[t] for t in range(n + 1)]
        tail = _tail_bound(econ.dividends, G, R, d, n, precision)

    dtype = float if precision is None else object
    arr = lambda xs: np.array(xs, dtype=dtype)  # noqa: E731
    return Trajectory(
        G=G, T=T if T is not None else n, k=arr(kk), p=arr(pp), R=arr(R), w=arr(w), d=arr(d),
        q=arr(q), v=arr(v), b=arr(b), status=status, fail_date=fail_date,
        precision=precision, v_tail_bound=tail, p0=p0,
    )


def _tail_bound(stream: DividendStream, G, R, d, n, precision):
    if stream.is_zero():
        return np.zeros(n + 1, dtype=float if precision is None else object)
    ratio = stream.declared_ratio
    if ratio is None or n < 2:
        return None
    Gd = ratio * G
    R_min = min(R[n // 2:])
    if not (R_min > max(Gd, G)):
        return None
    # d_{n+s} <= d_n * ratio**s and R_{n+s} >= R_min beyond the horizon.
    rate = Gd / R_min
    bound = d[n] * rate / (1 - rate)
    out = [bound] * (n + 1)
    for t in range(n - 1, -1, -1):
        out[t] = out[t + 1] * G / R[t + 1]
    return np.array(out, dtype=float if precision is None else object)


# --------------------------------------------------------------------------
# Residual checks
# --------------------------------------------------------------------------


def market_clearing_residual(econ: Economy, traj: Trajectory) -> float:
    """``max |G k_{t+1} + p_t - s(w_t, R_{t+1})| / max(1, G k_{t+1})``."""
    with working_precision(traj.precision):
        ep = econ.at_precision(traj.precision)
        worst = 0.0
        for t in range(traj.last):
            lhs = ep.G * traj.k[t + 1] + traj.p[t]
            rhs = ep.savings(traj.w[t], traj.R[t + 1])
            worst = max(worst, float(abs(lhs - rhs)) / max(1.0, float(ep.G * traj.k[t + 1])))
    return worst


def price_recursion_residual(traj: Trajectory) -> float:
    """``max |p_t - R_t/G p_{t-1} + d_t|`` scaled by ``max(p_t, R_t/G p_{t-1})``."""
    with working_precision(traj.precision):
        worst = 0.0
        for t in range(1, traj.last + 1):
            carried = traj.R[t] / traj.G * traj.p[t - 1]
            scale = max(abs(float(traj.p[t])), abs(float(carried)), 1e-300)
            worst = max(worst, float(abs(traj.p[t] - carried + traj.d[t])) / scale)
    return worst


def no_arbitrage_residual(traj: Trajectory) -> float:
    """Relative violation of ``q_t P_t = q_{t+1}(P_{t+1} + D_{t+1})``.

    Both sides are divided by ``q_t G**t`` before comparing, which keeps the
    check free of under/overflow over long horizons.
    """
    with working_precision(traj.precision):
        worst = 0.0
        for t in range(traj.last):
            lhs = traj.p[t]
            rhs = traj.G / traj.R[t + 1] * (traj.p[t + 1] + traj.d[t + 1])
            scale = max(abs(float(lhs)), abs(float(rhs)))
            if scale > 0:
                worst = max(worst, float(abs(lhs - rhs)) / scale)
    return worst


def present_value_residual(traj: Trajectory) -> float:
    """Relative violation of ``p_0 = sum_{s<=t} q_s G**s d_s + q_t G**t p_t`` over all ``t``.

    This is the one-step identity chained back to date 0; the discount
    ``q_t G**t`` is accumulated as one product so it stays representable.
    """
    with working_precision(traj.precision):
        p0 = traj.p[0]
        if not (abs(float(p0)) > 0):
            return 0.0
        worst = 0.0
        disc, pv = num(1, traj.precision), num(0, traj.precision)
        for t in range(1, traj.last + 1):
            disc = disc * traj.G / traj.R[t]
            pv = pv + disc * traj.d[t]
            worst = max(worst, float(abs(p0 - (pv + disc * traj.p[t]))) / abs(float(p0)))
    return worst


# --------------------------------------------------------------------------
# Steady states
# --------------------------------------------------------------------------


@dataclass
class SteadyStateReport:
    """Bubbleless steady states and the bubbly steady state.

    ``rho = R / G`` with ``R`` the largest bubbleless steady-state interest
    rate. ``k_bubbly``/``p_bubbly`` solve ``f'(k) = G``, ``p = p(k)`` and are
    reported only when ``p > 0``; ``p_golden`` keeps the raw value.
    """

    bubbleless: list
    R: float
    rho: float
    G: float
    k_golden: float | None
    p_golden: float | None
    k_bubbly: float | None = None
    p_bubbly: float | None = None
    warnings: list = field(default_factory=list)

    @property
    def has_bubbly(self) -> bool:
        return self.p_bubbly is not None

    def to_dict(self) -> dict:
        return {
            "bubbleless": [float(k) for k in self.bubbleless],
            "R": float(self.R),
            "rho": float(self.rho),
            "k_bubbly": self.k_bubbly,
            "p_bubbly": self.p_bubbly,
            "p_golden": self.p_golden,
            "warnings": list(self.warnings),
        }


def capital_cap(econ: Economy) -> float:
    """A capital level above every fixed point of ``k -> f(k)/G``."""
    tech, G = econ.technology, float(econ.G)
    K = max(float(econ.k0), 1.0)
    while tech.f(K) / G > K:
        K *= 2.0
    return K


def bubbleless_steady_states(econ: Economy, k_max: float | None = None,
                             grid_n: int = 512) -> SteadyStateReport:
    """All isolated roots of ``g(k, 0) = k`` plus the bubbly steady state.

    Sign scan of ``g(k, 0) - k`` on a log-spaced grid over
    ``[1e-8 k_max, k_max]``, each bracketed sign change refined by bisection.
    """
    econ = econ.at_precision(None)
    if k_max is None:
        k_max = 1.5 * capital_cap(econ)
    grid = np.geomspace(1e-8 * k_max, k_max, grid_n)

    def gap(k):
        return transition(econ, k, 0.0) - k

    vals = [gap(k) for k in grid]
    roots = []
    for i in range(grid_n - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0:
            roots.append(float(grid[i]))
        elif (a > 0) != (b > 0) and b != 0:
            # bisect expects an increasing function
            if a > 0:
                root = _prec.bisect(lambda k: -gap(k), grid[i], grid[i + 1], rtol=1e-15)
            else:
                root = _prec.bisect(gap, grid[i], grid[i + 1], rtol=1e-15)
            roots.append(float(root))
    if vals[-1] == 0:
        roots.append(float(grid[-1]))
    notes = []
    step = grid[1] / grid[0]
    for a, b in zip(roots, roots[1:]):
        if b / a < step ** 2:
            notes.append(f"steady states {a:.6g} and {b:.6g} are within two grid cells; "
                         "isolation may not be resolved")
    for msg in notes:
        warnings.warn(msg, RuntimeWarning, stacklevel=2)

    tech, G = econ.technology, float(econ.G)
    R = max((float(tech.fprime(k)) for k in roots), default=float("nan"))
    k_gold = p_gold = k_b = p_b = None
    try:
        k_gold = float(invert_marginal_product(tech, G))
        p_gold = float(p_of_k(econ, k_gold))
        if p_gold > 0:
            k_b, p_b = k_gold, p_gold
    except DomainError:
        pass
    return SteadyStateReport(bubbleless=roots, R=R, rho=R / G, G=G, k_golden=k_gold,
                             p_golden=p_gold, k_bubbly=k_b, p_bubbly=p_b, warnings=notes)


# --------------------------------------------------------------------------
# Diamond reference path
# --------------------------------------------------------------------------


@dataclass
class DiamondReference:
    """Capital path of the economy without the asset, ``k*_{t+1} = g(k*_t, 0)``.

    ``partial_sums[t]`` is ``sum_{s<=t} d_s G^s / (R*_1 ... R*_s)`` (entry 0
    is zero); ``tail_bound`` bounds the remainder of that series when the
    declared dividend growth rate is below ``R_limit``.
    """

    k: np.ndarray
    R: np.ndarray
    k_limit: float
    R_limit: float
    partial_sums: np.ndarray
    tail_bound: float | None
    monotone: bool

    @property
    def series_finite(self) -> bool | None:
        if self.partial_sums[-1] == 0 and self.tail_bound == 0:
            return True
        if self.tail_bound is not None:
            return True
        return None


def diamond_reference(econ: Economy, T: int) -> DiamondReference:
    econ = econ.at_precision(None)
    tech, G = econ.technology, econ.G
    k = [econ.k0]
    for _ in range(T):
        k.append(transition(econ, k[-1], 0.0))
    k = np.array(k)
    R = np.array([tech.fprime(x) for x in k])
    d = np.asarray(econ.dividends.values(T), dtype=float)
    log_disc = np.concatenate([[0.0], np.cumsum(np.log(R[1:]))])
    t = np.arange(T + 1)
    with np.errstate(divide="ignore", over="ignore"):
        terms = np.where(d > 0, np.exp(np.log(np.where(d > 0, d, 1.0)) + t * math.log(G) - log_disc), 0.0)
    terms[0] = 0.0
    sums = np.cumsum(terms)
    steps = np.diff(k)
    monotone = bool(np.all(steps >= -1e-14 * k[1:]) or np.all(steps <= 1e-14 * k[1:]))
    k_lim = float(k[-1])
    R_lim = float(tech.fprime(k_lim))
    ratio = econ.dividends.declared_ratio
    tail = None
    if econ.dividends.is_zero():
        tail = 0.0
    elif ratio is not None and ratio * G < R_lim and terms[-1] > 0:
        # ratio of consecutive terms tends to G_d / R*; use the worse of the
        # asymptotic rate and the observed last ratio.
        r = max(ratio * G / R_lim, terms[-1] / terms[-2] if terms[-2] > 0 else 0.0)
        tail = float(terms[-1] * r / (1 - r)) if r < 1 else None
    return DiamondReference(k=k, R=R, k_limit=k_lim, R_limit=R_lim, partial_sums=sums,
                            tail_bound=tail, monotone=monotone)


# --------------------------------------------------------------------------
# Dividend growth
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthEstimate:
    value: float
    exact: bool


def dividend_growth_estimate(stream: DividendStream, T: int, G: float = 1.0) -> GrowthEstimate:
    """Long-run dividend growth rate ``G_d = limsup D_t**(1/t)``.

    Exact when the stream declares it; otherwise the maximum of
    ``D_t**(1/t)`` over ``t in [T/2, T]``, a finite-horizon proxy.
    """
    if T < 2:
        raise ValueError("T must be at least 2")
    G = float(G)
    if stream.is_zero():
        return GrowthEstimate(0.0, True)
    if stream.declared_ratio is not None:
        return GrowthEstimate(float(stream.declared_ratio) * G, True)
    best = 0.0
    for t in range(max(1, T // 2), T + 1):
        dt = float(stream.at(t))
        if dt > 0:
            best = max(best, G * math.exp(math.log(dt) / t))
    if best == 0.0 and all(float(stream.at(t)) == 0 for t in range(T + 1)):
        return GrowthEstimate(0.0, True)
    return GrowthEstimate(best, False)


# --------------------------------------------------------------------------
# Conditioning of forward shooting
# --------------------------------------------------------------------------


def shooting_bits(econ: Economy, k, p, *, target_digits: int = 14, margin_bits: int = 64) -> int:
    """Working precision needed to shoot along a known path.

    Propagates a tangent vector of the one-step map ``(k, p) -> (k', p')``
    in relative coordinates along the reference path and returns enough
    bits to absorb the worst error amplification between any two dates,
    plus ``target_digits`` of accuracy and a safety margin.
    """
    e = econ.at_precision(None)
    tech, rule, G = e.technology, e.savings, e.G
    n = len(k) - 1
    d = [float(x) for x in e.dividends.values(n)]
    k = [float(x) for x in k]
    p = [float(x) for x in p]
    vk, vp = 0.0, 1.0
    growth = low = worst = 0.0
    for t in range(n):
        k0, p0, k1, p1 = k[t], p[t], k[t + 1], p[t + 1]
        w = tech.wage(k0)
        dw = -k0 * tech.fsecond(k0)
        R1 = tech.fprime(k1)
        h = 1e-6
        s_w = (rule(w * (1 + h), R1) - rule(w * (1 - h), R1)) / (2 * h * w)
        s_R = (rule(w, R1 * (1 + h)) - rule(w, R1 * (1 - h))) / (2 * h * R1) if rule.depends_on_rate else 0.0
        phi_x = G - s_R * tech.fsecond(k1)
        dk_dk = s_w * dw / phi_x
        dk_dp = -1.0 / phi_x
        dp_dk1 = tech.fsecond(k1) / G * p0
        dp_dp = R1 / G
        sp0 = p0 if p0 > 0 else 1.0
        sp1 = p1 if p1 > 0 else 1.0
        a11 = dk_dk * k0 / k1
        a12 = dk_dp * sp0 / k1
        a21 = dp_dk1 * dk_dk * k0 / sp1
        a22 = (dp_dk1 * dk_dp + dp_dp) * sp0 / sp1
        vk, vp = a11 * vk + a12 * vp, a21 * vk + a22 * vp
        norm = max(abs(vk), abs(vp))
        if not math.isfinite(norm) or norm == 0:
            vk, vp, norm = 0.0, 1.0, 1.0
        vk, vp = vk / norm, vp / norm
        growth += math.log2(norm)
        low = min(low, growth)
        worst = max(worst, growth - low)
    return int(math.ceil(worst)) + int(math.ceil(target_digits * math.log2(10))) + margin_bits
