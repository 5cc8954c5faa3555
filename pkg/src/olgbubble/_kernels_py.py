"""Pure-Python twin of ``_kernels.pyx`` (same signatures and status codes)."""
from __future__ import annotations

import math

import numpy as np


def _wage(tech, A, alpha, par, k):
    if tech == 0:
        return A * (1.0 - alpha) * k**alpha
    return A * (1.0 - alpha) * k**alpha + par * k / (1.0 + k)


def _fprime(tech, A, alpha, par, k):
    if tech == 0:
        return A * alpha * k ** (alpha - 1.0) + (1.0 - par)
    return A * alpha * k ** (alpha - 1.0) + par * (math.log1p(1.0 / k) - 1.0 / (1.0 + k))


def shoot(tech, A, alpha, par, beta, G, k0, p0, d, T, k_out, p_out, low_tol=1e-12):
    k, p = float(k0), float(p0)
    k_out[0], p_out[0] = k, p
    for t in range(T):
        x = (beta * _wage(tech, A, alpha, par, k) - p) / G
        if not x > 0.0:
            return 2, t
        try:
            pn = _fprime(tech, A, alpha, par, x) / G * p - d[t + 1]
        except OverflowError:
            return 2, t
        if pn < -low_tol or not math.isfinite(pn):
            return (1 if pn < -low_tol else 2), t
        k, p = x, pn
        k_out[t + 1], p_out[t + 1] = k, p
    return 0, T


def survival(tech, A, alpha, par, beta, G, k0, p0s, d, T, status_out, tend_out, low_tol=1e-12):
    # Vectorised over initial prices; a path is frozen once it terminates.
    p = np.array(p0s, dtype=float)
    k = np.full_like(p, float(k0))
    status = np.zeros(p.shape, dtype=np.int32)
    tend = np.full(p.shape, T, dtype=np.int32)
    live = np.ones(p.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for t in range(T):
            if not live.any():
                break
            kl, pl = k[live], p[live]
            x = (beta * _wage_vec(tech, A, alpha, par, kl) - pl) / G
            high = ~(x > 0.0)
            pn = _fprime_vec(tech, A, alpha, par, np.where(high, 1.0, x)) / G * pl - d[t + 1]
            low = ~high & (pn < -low_tol)
            high |= ~low & ~np.isfinite(pn)
            idx = np.flatnonzero(live)
            status[idx[high]] = 2
            status[idx[low]] = 1
            tend[idx[high | low]] = t
            ok = ~(high | low)
            k[idx[ok]] = x[ok]
            p[idx[ok]] = pn[ok]
            live[idx[~ok]] = False
    status_out[:] = status
    tend_out[:] = tend


def _wage_vec(tech, A, alpha, par, k):
    if tech == 0:
        return A * (1.0 - alpha) * k**alpha
    return A * (1.0 - alpha) * k**alpha + par * k / (1.0 + k)


def _fprime_vec(tech, A, alpha, par, k):
    if tech == 0:
        return A * alpha * k ** (alpha - 1.0) + (1.0 - par)
    return A * alpha * k ** (alpha - 1.0) + par * (np.log1p(1.0 / k) - 1.0 / (1.0 + k))
