"""Scalar arithmetic that works for both float64 and MPFR numbers.

Model code is written once against Python operators. When a computation
needs more than double precision (forward shooting amplifies rounding
errors geometrically), the same code runs on ``gmpy2.mpfr`` values inside
:func:`working_precision`.
"""
from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from numbers import Real

import gmpy2

MPFR = type(gmpy2.mpfr(0))

# Smallest capital probe; f'(0+) = inf is never evaluated symbolically.
K_PROBE = 1e-300


def working_precision(bits: int | None):
    """Context manager fixing the MPFR precision (no-op for ``None``)."""
    if bits is None:
        return contextlib.nullcontext()
    return gmpy2.context(gmpy2.get_context(), precision=int(bits))


def num(x, bits: int | None):
    """Convert a parameter to the working number type.

    Fractions and decimal strings are converted exactly (up to the working
    precision), so rational parameters such as ``2/3`` keep full accuracy
    in extended mode.
    """
    if bits is None:
        return float(x)
    if isinstance(x, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))
    if isinstance(x, str):
        return gmpy2.mpfr(gmpy2.mpq(Fraction(x).numerator, Fraction(x).denominator))
    return gmpy2.mpfr(x)


def rpow(x, e, exact: Fraction | None = None):
    """``x**e``; for MPFR ``x`` and a rational ``exact == e`` with a small
    denominator this is an integer power of an n-th root, far cheaper than
    the general exp/log power at high precision."""
    if exact is not None and isinstance(x, MPFR) and exact.denominator <= 1024:
        return gmpy2.rootn(x, exact.denominator) ** exact.numerator
    return x**e


def current_bits() -> int:
    return gmpy2.get_context().precision


def probe_like(x):
    """``K_PROBE`` in the number type of ``x``."""
    return gmpy2.mpfr(K_PROBE) if isinstance(x, MPFR) else K_PROBE


def is_mp(x) -> bool:
    return isinstance(x, MPFR)


def log(x):
    return gmpy2.log(x) if isinstance(x, MPFR) else math.log(x)


def log1p(x):
    return gmpy2.log1p(x) if isinstance(x, MPFR) else math.log1p(x)


def exp(x):
    return gmpy2.exp(x) if isinstance(x, MPFR) else math.exp(x)


def flog(x) -> float:
    """Natural log as a float, without under/overflow for tiny or huge MPFR values."""
    if isinstance(x, MPFR):
        if not (x > 0):
            return -math.inf if x == 0 else math.nan
        e, m = gmpy2.frexp(x)
        return math.log(float(m)) + e * math.log(2.0)
    return math.log(x) if x > 0 else (-math.inf if x == 0 else math.nan)


def sqrt(x):
    return gmpy2.sqrt(x) if isinstance(x, MPFR) else math.sqrt(x)


def parse_real(text: str | Real) -> Real:
    """Parse ``"2/3"``, ``"1e-8"`` or ``"0.9"``; rationals stay Fractions."""
    if isinstance(text, Real):
        return text
    s = text.strip()
    if "/" in s:
        return Fraction(s)
    try:
        return Fraction(s) if _is_plain_decimal(s) else float(s)
    except ValueError:
        return float(s)


def _is_plain_decimal(s: str) -> bool:
    body = s.lstrip("+-")
    return bool(body) and all(c.isdigit() or c == "." for c in body) and body.count(".") <= 1


def bisect(fun, lo, hi, *, rtol=1e-12, atol=0.0, maxiter=200, geometric=False):
    """Root of an increasing function on ``[lo, hi]`` with ``fun(lo) < 0 <= fun(hi)``.

    Returns the midpoint of the final bracket. The loop also stops once the
    midpoint can no longer be distinguished from an endpoint, which is what
    terminates MPFR runs at their working precision. ``geometric`` bisects
    in log-space for brackets spanning many orders of magnitude (requires
    ``lo > 0``).
    """
    if is_mp(lo) or is_mp(hi):
        maxiter = max(maxiter, gmpy2.get_context().precision + 64)
        rtol = min(rtol, 2.0 ** (-gmpy2.get_context().precision + 4))
    for _ in range(maxiter):
        if geometric and hi > 4 * lo:
            mid = sqrt(lo * hi)
        else:
            mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:
            break
        if fun(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= max(atol, rtol * abs(hi)):
            break
    return (lo + hi) / 2
