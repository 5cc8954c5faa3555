"""Equilibrium set, long-run classification, bubble detection and regime checks.

Every candidate ``p_0`` is tested by forward shooting: it survives a horizon
``T`` when the simulated path stays feasible for ``T`` periods. Surviving
initial prices form an interval whose endpoints are located by two
bisections, one on the fail-low boundary and one on the fail-high boundary.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._prec import num, working_precision
from .dynamics import (
    LOW_TOL,
    SteadyStateReport,
    Trajectory,
    bubbleless_steady_states,
    diamond_reference,
    dividend_growth_estimate,
    simulate,
)
from .primitives import Economy, p_of_k, transition, wage

__all__ = [
    "EquilibriumSet",
    "NoSurvivorError",
    "equilibrium_set",
    "grid_shoot",
    "survival_status",
    "Classification",
    "classify",
    "BubbleTest",
    "bubble_test",
    "Condition",
    "RegimeReport",
    "regime_report",
]

COMPLETED, FAIL_LOW, FAIL_HIGH = "completed", "fail_low", "fail_high"


class NoSurvivorError(RuntimeError):
    """No initial price survived; ``grid`` lists the probes ``(p0, status)``."""

    def __init__(self, msg: str, grid: list):
        self.grid = grid
        super().__init__(msg)


# --------------------------------------------------------------------------
# Survival probes
# --------------------------------------------------------------------------


class _Prober:
    """Survival status of ``p_0`` at a horizon, memoised per (p0, T, bits)."""

    def __init__(self, econ: Economy, low_tol: float = LOW_TOL):
        self.econ = econ
        self.low_tol = low_tol
        self.params = kernels.kernel_params(econ)
        self.log: list = []
        self._cache: dict = {}
        self._d = None

    def _dividends(self, T):
        if self._d is None or len(self._d) < T + 1:
            self._d = np.asarray(self.econ.dividends.values(T), dtype=float)
        return self._d[: T + 1]

    def __call__(self, p0, T: int, bits: int | None = None) -> str:
        key = (p0, T, bits)
        if key in self._cache:
            return self._cache[key]
        if bits is None and self.params is not None:
            k_out = np.empty(T + 1)
            p_out = np.empty(T + 1)
            code, _ = kernels.shoot(*self.params, float(self.econ.k0), float(p0),
                                    self._dividends(T), T, k_out, p_out, self.low_tol)
            status = kernels.FAIL_CODES[code]
        else:
            status = simulate(self.econ, p0, T, precision=bits, low_tol=self.low_tol).status
        self._cache[key] = status
        self.log.append((float(p0), T, bits, status))
        return status


def survival_status(econ: Economy, p0s, T: int, low_tol: float = LOW_TOL) -> list[str]:
    """Vectorised float64 survival test for many initial prices."""
    p0s = np.ascontiguousarray(p0s, dtype=float)
    params = kernels.kernel_params(econ)
    if params is None:
        return [simulate(econ, p, T, low_tol=low_tol).status for p in p0s]
    d = np.asarray(econ.dividends.values(T), dtype=float)
    status = np.empty(len(p0s), dtype=np.int32)
    tend = np.empty(len(p0s), dtype=np.int32)
    kernels.survival(*params, float(econ.k0), p0s, d, T, status, tend, low_tol)
    return [kernels.FAIL_CODES[int(c)] for c in status]


def price_cap(econ: Economy):
    """An initial price that always fails high: the whole first-period wage."""
    return float(wage(econ.technology, econ.k0))


# --------------------------------------------------------------------------
# Equilibrium set
# --------------------------------------------------------------------------


@dataclass
class EquilibriumSet:
    """Finite-horizon estimate of the set of equilibrium initial prices.

    ``p_lower``/``p_upper`` are the smallest/largest probed survivors and
    the widths are the final bisection brackets. ``degenerate`` marks a set
    that collapsed to one point at resolution ``tol``. ``sensitivity``
    repeats the float bisection at horizon ``2T``.
    """

    p_lower: float
    p_lower_width: float
    p_upper: float
    p_upper_width: float
    T: int
    tol: float
    lower: Trajectory | None = None
    upper: Trajectory | None = None
    degenerate: bool = False
    sensitivity: dict = field(default_factory=dict)
    resolved: dict = field(default_factory=dict)
    probes: int = 0

    def to_dict(self) -> dict:
        return {
            "p_lower": self.p_lower,
            "p_lower_width": self.p_lower_width,
            "p_upper": self.p_upper,
            "p_upper_width": self.p_upper_width,
            "T": self.T,
            "tol": self.tol,
            "degenerate": self.degenerate,
            "sensitivity": self.sensitivity,
            "resolved": self.resolved,
            "probes": self.probes,
            "lower_status": None if self.lower is None else self.lower.status,
            "upper_status": None if self.upper is None else self.upper.status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _bisect_boundary(probe, lo, hi, T, tol, bad: str, bits=None, min_width=0.0):
    """Shrink ``[lo, hi]`` where ``probe(lo) != bad`` side and ``probe(hi)`` is on the
    ``bad`` side (``bad`` is fail_high) or the reverse for fail_low."""
    while hi - lo > max(tol, min_width):
        mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:
            break
        s = probe(mid, T, bits)
        if bad == FAIL_HIGH:
            if s == FAIL_HIGH:
                hi = mid
            else:
                lo = mid
        else:
            if s == FAIL_LOW:
                lo = mid
            else:
                hi = mid
    return lo, hi


def _float_brackets(probe, econ, T, tol):
    cap = price_cap(econ)
    if probe(cap, T) != FAIL_HIGH:
        raise NoSurvivorError("price cap did not fail high", probe.log)
    up_lo, up_hi = _bisect_boundary(probe, 0.0, cap, T, tol, FAIL_HIGH)
    s0 = probe(0.0, T)
    if s0 != FAIL_LOW:
        low_lo, low_hi = 0.0, 0.0
    else:
        low_lo, low_hi = _bisect_boundary(probe, 0.0, up_hi, T, tol, FAIL_LOW)
    return (low_lo, low_hi), (up_lo, up_hi)


def equilibrium_set(econ: Economy, T: int = 400, tol: float = 1e-8, *, resolve: bool = True,
                    sensitivity: bool = True, max_bits: int = 1024,
                    low_tol: float = LOW_TOL) -> EquilibriumSet:
    """Bracket the smallest and largest initial prices that survive ``T`` periods.

    With ``resolve=True`` each nonzero endpoint of a nondegenerate set is
    refined in MPFR arithmetic at horizon ``1.25 T + 10`` until two
    neighbouring probes produce the same date-``T`` state; this is what
    makes the upper endpoint path track a saddle for ``T`` periods.
    """
    if T < 1 or not (tol > 0):
        raise ValueError("need T >= 1 and tol > 0")
    probe = _Prober(econ, low_tol)
    (low_lo, low_hi), (up_lo, up_hi) = _float_brackets(probe, econ, T, tol)

    degenerate = False
    if low_hi <= up_lo and probe((low_hi + up_lo) / 2, T) == COMPLETED or low_hi == up_lo == 0.0:
        p_lower, w_lower = low_hi, low_hi - low_lo
        p_upper, w_upper = up_lo, up_hi - up_lo
    elif probe(low_hi, T) == COMPLETED:
        p_lower, w_lower = low_hi, low_hi - low_lo
        p_upper, w_upper = up_lo, up_hi - up_lo
    else:
        span_lo, span_hi = min(low_lo, up_lo), max(low_hi, up_hi)
        if span_hi - span_lo > 4 * tol:
            raise NoSurvivorError(
                f"no surviving p0 at T={T}, tol={tol}: fail-low boundary near {low_hi:.12g}, "
                f"fail-high boundary near {up_lo:.12g}", sorted(set((p, s) for p, _, _, s in probe.log)))
        degenerate = True
        mid = (span_lo + span_hi) / 2
        p_lower = p_upper = mid
        w_lower = w_upper = span_hi - span_lo

    out = EquilibriumSet(p_lower=p_lower, p_lower_width=w_lower, p_upper=p_upper,
                         p_upper_width=w_upper, T=T, tol=tol, degenerate=degenerate)
    out.lower = simulate(econ, p_lower, T, low_tol=low_tol)
    out.upper = simulate(econ, p_upper, T, low_tol=low_tol)

    if resolve and not degenerate:
        if p_upper > 0:
            res = _resolve(econ, probe, up_lo, up_hi, T, FAIL_HIGH, max_bits)
            out.resolved["upper"] = res["info"]
            if res["trajectory"] is not None:
                out.upper = res["trajectory"]
                out.p_upper = float(res["p"])
        if p_lower > 0:
            res = _resolve(econ, probe, low_lo, low_hi, T, FAIL_LOW, max_bits)
            out.resolved["lower"] = res["info"]
            if res["trajectory"] is not None:
                out.lower = res["trajectory"]
                out.p_lower = float(res["p"])

    if sensitivity:
        try:
            (l2, h2), (u2, v2) = _float_brackets(_Prober(econ, low_tol), econ, 2 * T, tol)
            out.sensitivity = {"T": 2 * T, "p_lower": h2, "p_upper": u2,
                               "delta_lower": h2 - out.p_lower, "delta_upper": u2 - out.p_upper}
        except NoSurvivorError as exc:
            out.sensitivity = {"T": 2 * T, "error": str(exc)}
    out.probes = len(probe.log)
    return out


def _resolve(econ, probe, lo, hi, T, bad, max_bits, agree=1e-9):
    H = int(math.ceil(1.25 * T)) + 10
    bits = 128
    info = {"horizon": H, "attempts": []}
    while bits <= max_bits:
        with working_precision(bits):
            a, b = num(lo, bits), num(hi, bits)
            sa, sb = probe(a, H, bits), probe(b, H, bits)
            ok = (sa != bad and sb == bad) if bad == FAIL_HIGH else (sa == bad and sb != bad)
            if ok:
                a, b = _bisect_boundary(probe, a, b, H, 0, bad, bits)
                good = a if bad == FAIL_HIGH else b
                other = b if bad == FAIL_HIGH else a
                ta = simulate(econ, good, T, precision=bits)
                tb = simulate(econ, other, T, precision=bits)
                match = (ta.completed and tb.completed
                         and abs(float(ta.k[-1] - tb.k[-1])) <= agree * max(1.0, float(ta.k[-1]))
                         and abs(float(ta.p[-1] - tb.p[-1])) <= agree * max(1.0, float(ta.p[-1])))
                info["attempts"].append({"bits": bits, "bracket_ok": True, "agree": bool(match)})
                if match:
                    info.update(bits=bits, width=float(b - a))
                    return {"p": good, "trajectory": ta, "info": info}
            else:
                info["attempts"].append({"bits": bits, "bracket_ok": False})
        bits *= 2
    info["note"] = "endpoint path not reproducible within max_bits; kept float64 estimate"
    return {"p": None, "trajectory": None, "info": info}


def grid_shoot(econ: Economy, T: int, tol: float, n: int = 10_000, lo: float = 0.0,
               hi: float | None = None) -> dict:
    """Independent estimate of the surviving interval by dense grid scans.

    Scans ``n`` prices on ``[lo, hi]`` and zooms into the cells that
    contain the extreme survivors until the spacing is at most ``tol``.
    """
    hi = price_cap(econ) if hi is None else hi

    def scan(a, b):
        grid = np.linspace(a, b, n)
        st = survival_status(econ, grid, T)
        ok = [i for i, s in enumerate(st) if s == COMPLETED]
        return grid, ok

    grid, ok = scan(lo, hi)
    if not ok:
        raise NoSurvivorError(f"grid of {n} points found no survivor", list(zip(grid, ["-"] * 0)))
    out = {}
    for side in ("upper", "lower"):
        g, idx = grid, (ok[-1] if side == "upper" else ok[0])
        spacing = g[1] - g[0]
        while spacing > tol:
            if side == "upper":
                if idx == len(g) - 1:
                    break
                a, b = g[idx], g[idx + 1]
            else:
                if idx == 0:
                    break
                a, b = g[idx - 1], g[idx]
            g2, ok2 = scan(a, b)
            if not ok2:
                break
            g, idx = g2, (ok2[-1] if side == "upper" else ok2[0])
            spacing = g[1] - g[0]
        out[side] = float(g[idx])
        out[side + "_spacing"] = float(spacing)
    return out


# --------------------------------------------------------------------------
# Classification
# --------------------------------------------------------------------------


@dataclass
class Classification:
    label: str
    k_T: float
    p_T: float
    R_T: float
    montrucchio_sum: float
    target: dict | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"label": self.label, "k_T": self.k_T, "p_T": self.p_T, "R_T": self.R_T,
                "montrucchio_sum": self.montrucchio_sum, "target": self.target,
                "notes": list(self.notes)}


def _montrucchio(traj: Trajectory) -> float:
    f = traj.as_float()
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(f.p[1:] > 0, f.d[1:] / np.where(f.p[1:] > 0, f.p[1:], 1.0), np.inf)
    terms = np.where(f.d[1:] == 0, 0.0, terms)
    return float(np.sum(terms))


def classify(traj: Trajectory, ss: SteadyStateReport, econ: Economy | None = None, *,
             tol: float | None = None, k_floor: float = 1e-6,
             R_ceiling: float | None = None) -> Classification:
    """Label the long-run behaviour suggested by the terminal state of ``traj``.

    The label is finite-horizon evidence: ``asymptotically_bubbly`` needs
    ``R_T``, ``k_T`` within ``tol`` of the bubbly steady state and
    ``p_T >= p_b/2``; ``bubbleless_k_to_zero`` needs ``k_T <= k_floor`` and
    ``R_T >= R_ceiling``; ``asymptotically_bubbleless`` needs ``p_T <= tol``
    with ``k_T`` within ``tol`` of a bubbleless steady state.
    """
    G = float(ss.G if econ is None else econ.G)
    tol = 1e-4 * max(1.0, G) if tol is None else tol
    R_ceiling = 10 * G if R_ceiling is None else R_ceiling
    f = traj.as_float()
    n = f.last
    kT, pT, RT = float(f.k[n]), float(f.p[n]), float(f.R[n])
    out = Classification("inconclusive", kT, pT, RT, _montrucchio(traj))
    if not traj.completed:
        out.notes.append(f"trajectory {traj.status} at t={traj.fail_date}; no long-run label")
        return out
    if kT <= k_floor and RT >= R_ceiling:
        out.label = "bubbleless_k_to_zero"
        out.target = {"k": 0.0, "p": 0.0, "distance": kT}
        return out
    if ss.has_bubbly and abs(RT - G) <= tol and abs(kT - ss.k_bubbly) <= tol and pT >= ss.p_bubbly / 2:
        out.label = "asymptotically_bubbly"
        out.target = {"k": ss.k_bubbly, "p": ss.p_bubbly,
                      "distance": max(abs(kT - ss.k_bubbly), abs(pT - ss.p_bubbly))}
        return out
    if pT <= tol and ss.bubbleless:
        k_near = min(ss.bubbleless, key=lambda k: abs(k - kT))
        if abs(k_near - kT) <= tol:
            out.label = "asymptotically_bubbleless"
            out.target = {"k": k_near, "p": 0.0, "distance": max(abs(kT - k_near), pT)}
            return out
    out.notes.append("terminal state not within tolerance of any limit class")
    return out


# --------------------------------------------------------------------------
# Bubble test via summability of d_t / p_t
# --------------------------------------------------------------------------


@dataclass
class BubbleTest:
    partial_sums: np.ndarray
    verdict: str
    ratio: float | None = None
    tail_bound: float | None = None
    notes: list = field(default_factory=list)

    @property
    def S_T(self) -> float:
        return float(self.partial_sums[-1]) if len(self.partial_sums) else 0.0

    def to_dict(self) -> dict:
        return {"S_T": self.S_T, "verdict": self.verdict, "ratio": self.ratio,
                "tail_bound": self.tail_bound, "notes": list(self.notes)}


def bubble_test(traj: Trajectory, eps: float = 1e-6) -> BubbleTest:
    """With positive prices the asset carries a bubble iff ``sum d_t/p_t < inf``.

    ``bubbly`` needs the increments over the last half to decay at a fitted
    geometric rate below one, with every observed step ratio in the last
    quarter below one so the remainder is bounded; ``bubbleless`` needs the
    increments to stay bounded away from zero. Anything else is
    ``inconclusive``.
    """
    f = traj.as_float()
    n = f.last
    p, d, R, G = f.p, f.d, f.R, f.G
    if n < 4:
        return BubbleTest(np.zeros(0), "inconclusive", notes=["horizon too short"])
    if np.all(p[1:] == 0) and np.all(d[1:] == 0):
        return BubbleTest(np.zeros(n), "bubbleless", notes=["price identically zero"])
    if np.any(p[1:] <= 0):
        tail = R[n // 2:]
        if np.all(tail > G * (1 + eps)):
            return BubbleTest(np.zeros(0), "bubbleless",
                              notes=["nonpositive prices; R_t > G on the last half bounds the bubble to zero"])
        return BubbleTest(np.zeros(0), "inconclusive", notes=["nonpositive prices"])
    if np.all(d[1:] == 0):
        return BubbleTest(np.zeros(n), "bubbly", ratio=0.0, tail_bound=0.0,
                          notes=["pure bubble: positive price and no dividends"])

    # use the exact-type arrays so tiny prices and dividends keep their ratio
    with working_precision(traj.precision):
        terms = np.array([float(traj.d[t] / traj.p[t]) for t in range(1, n + 1)])
    sums = np.cumsum(terms)
    half = terms[n // 2 - 1:]
    quarter = terms[3 * n // 4 - 1:]
    if np.all(half > 0):
        t_idx = np.arange(len(half))
        slope = np.polyfit(t_idx, np.log(half), 1)[0]
        ratio = float(math.exp(slope))
        steps = quarter[1:] / quarter[:-1]
        r_max = float(np.max(steps))
        if ratio < 1 and r_max < 1:
            bound = float(terms[-1] * r_max / (1 - r_max))
            return BubbleTest(sums, "bubbly", ratio=ratio, tail_bound=bound)
        if ratio >= 1 - 1e-12 and np.min(half) > 0:
            return BubbleTest(sums, "bubbleless", ratio=ratio,
                              notes=[f"increments bounded below by {np.min(half):.3g} on the last half"])
        return BubbleTest(sums, "inconclusive", ratio=ratio)
    return BubbleTest(sums, "inconclusive", notes=["zero increments in the last half"])


# --------------------------------------------------------------------------
# Regime conditions
# --------------------------------------------------------------------------


@dataclass
class Condition:
    name: str
    status: str
    values: dict
    caveat: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "values": self.values, "caveat": self.caveat}


@dataclass
class RegimeReport:
    T: int
    conditions: list
    prediction: str
    eqset: EquilibriumSet | None = None

    def condition(self, name: str) -> Condition:
        return next(c for c in self.conditions if c.name == name)

    def to_dict(self) -> dict:
        e = self.eqset
        return {
            "p_lower": None if e is None else e.p_lower,
            "p_lower_width": None if e is None else e.p_lower_width,
            "p_upper": None if e is None else e.p_upper,
            "p_upper_width": None if e is None else e.p_upper_width,
            "T": self.T,
            "conditions": [c.to_dict() for c in self.conditions],
            "prediction": self.prediction,
        }


def _status(flag):
    return "inconclusive" if flag is None else ("holds" if flag else "fails")


def _clean(x):
    x = float(x)
    return x if math.isfinite(x) else (None if math.isnan(x) else ("inf" if x > 0 else "-inf"))


def regime_report(econ: Economy, ss: SteadyStateReport | None = None, T: int = 400, *,
                  eqset: EquilibriumSet | None = None, margin: float = 0.05) -> RegimeReport:
    """Evaluate the testable existence, uniqueness and continuum conditions.

    Every check works on a finite horizon; ``caveat`` says what the finite
    computation cannot certify.
    """
    econ_f = econ.at_precision(None)
    ss = bubbleless_steady_states(econ_f) if ss is None else ss
    G = float(econ_f.G)
    stream = econ.dividends
    d = np.asarray(stream.values(T), dtype=float)
    conds = []

    # (a) divergent detrended dividend sum rules out bubbles
    ratio = stream.declared_ratio
    S_T = float(np.sum(d[1:]))
    if stream.is_zero():
        flag = False
    elif ratio is not None:
        flag = None if ratio == 1 else bool(ratio > 1)
    else:
        first, second = float(np.sum(d[1: T // 2 + 1])), float(np.sum(d[T // 2 + 1:]))
        flag = True if second >= first > 0 else None
    conds.append(Condition("dividend_sum_diverges", _status(flag),
                           {"partial_sum": _clean(S_T), "declared_ratio": None if ratio is None else float(ratio)},
                           "divergence is inferred from the declared growth rate or the last-half increment"))

    # (b) Diamond interest rate above growth
    ref = diamond_reference(econ_f, T)
    R_star = ref.R_limit
    if ref.k_limit <= 1e-12 or R_star > G * (1 + 1e-9):
        flag = True
    elif R_star < G * (1 - 1e-9):
        flag = False
    else:
        flag = None
    conds.append(Condition("diamond_rate_above_growth", _status(flag),
                           {"R_star": _clean(R_star), "k_star": _clean(ref.k_limit), "G": G},
                           f"limit read off the Diamond path at t={T}"))

    # (c) R < G_d < G
    gd = dividend_growth_estimate(stream, T, G)
    R = float(ss.R)
    if gd.exact:
        flag = bool(R < gd.value < G)
    else:
        slack = min(gd.value - R, G - gd.value)
        flag = None if abs(slack) <= margin * G else bool(slack > 0)
    conds.append(Condition("rate_below_dividend_growth_below_G", _status(flag),
                           {"R": R, "G_d": gd.value, "G_d_exact": gd.exact, "G": G},
                           "" if gd.exact else "G_d estimated from max d_t^(1/t) over the last half"))

    # (d) over-accumulation
    flag = bool(R < G) if ss.bubbleless else None
    conds.append(Condition("over_accumulation", _status(flag),
                           {"sup_fprime_K": R, "G": G, "K": [float(k) for k in ss.bubbleless]},
                           "steady states found by a grid sign scan"))

    # (e) discounted dividends at R_m bounded by p(k0)
    tech = econ_f.technology
    k0 = float(econ_f.k0)
    k_bar = max(ss.bubbleless) if ss.bubbleless else k0
    R_m = float(tech.fprime(max(k0, k_bar)))
    p_k0 = float(p_of_k(econ_f, k0))
    pre = bool(tech.fprime(k0) <= G and transition(econ_f, k0, 0.0) > k0)
    t = np.arange(T + 1)
    with np.errstate(divide="ignore", over="ignore"):
        terms = np.where(d > 0, np.exp(np.log(np.where(d > 0, d, 1.0)) + t * math.log(G / R_m)), 0.0)
    terms[0] = 0.0
    lhs = float(np.sum(terms))
    tail = 0.0 if stream.is_zero() else None
    if tail is None and ratio is not None and ratio * G < R_m and terms[-1] > 0:
        r = ratio * G / R_m
        tail = float(terms[-1] * r / (1 - r))
    if not pre:
        flag = None
    elif lhs > p_k0:
        flag = False
    elif tail is not None:
        flag = bool(lhs + tail <= p_k0)
    else:
        flag = None
    conds.append(Condition("discounted_dividends_below_p_k0", _status(flag),
                           {"lhs_partial": lhs, "tail_bound": tail, "p_k0": p_k0, "R_m": R_m,
                            "prerequisites": pre},
                           "needs f'(k0) <= G and g(k0, 0) > k0; tail bound assumes the declared growth rate"))

    # bubbleless condition: sum D_t / (R*_1 ... R*_t) < inf
    fin = ref.series_finite
    if fin is None and ratio is not None and ratio * G > R_star:
        fin = False
    conds.append(Condition("bubbleless_series_finite", _status(fin),
                           {"partial_sum": _clean(ref.partial_sums[-1]), "tail_bound": ref.tail_bound},
                           "finiteness certified only through a declared dividend growth rate"))

    status = {c.name: c.status for c in conds}
    if status["dividend_sum_diverges"] == "holds" or status["diamond_rate_above_growth"] == "holds":
        pred = "unique_bubbleless"
    elif status["over_accumulation"] == "holds" and status["rate_below_dividend_growth_below_G"] == "holds":
        pred = "unique: bubbleless_k_to_zero or asymptotically_bubbly"
    elif status["over_accumulation"] == "holds" and stream.is_zero():
        pred = "continuum"
    elif (status["over_accumulation"] == "holds" and status["discounted_dividends_below_p_k0"] == "holds"
          and status["bubbleless_series_finite"] == "holds"):
        pred = "continuum"
    elif status["over_accumulation"] == "holds":
        pred = "one of: unique bubbleless_k_to_zero, unique asymptotically_bubbly, continuum"
    else:
        pred = "undetermined"
    return RegimeReport(T=T, conditions=conds, prediction=pred, eqset=eqset)
