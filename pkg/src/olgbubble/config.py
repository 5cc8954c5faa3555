"""Scenario files: INI sections ``[economy]``, ``[dividends]`` and ``[run]``.

Numbers may be written as fractions (``alpha = 2/3``); they are kept exact
so extended-precision runs see the intended rational values.
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ._prec import parse_real
from .closedform import FAMILIES, XSequenceSpec
from .primitives import (
    CDPlusLog,
    CobbDouglas,
    CRRASavings,
    Economy,
    GeometricDividends,
    LogSavings,
    SequenceDividends,
    no_dividends,
)

__all__ = ["ConfigError", "Scenario", "load_config", "parse_config", "PRESETS", "preset"]


class ConfigError(ValueError):
    """Invalid scenario file; the message names the section, key and line."""


@dataclass
class Scenario:
    economy: Economy
    family: XSequenceSpec | None = None
    theta: object = None  # None, "auto" or a number
    t0: int | None = None
    command: str | None = None
    p0: object = None  # number, "constructed" or None
    p0_range: tuple | None = None
    horizon: int = 200
    tol: float = 1e-8
    precision: object = None  # None (float64), "auto" or bits
    out: str | None = None
    source: str = ""
    raw: dict = field(default_factory=dict)

    @property
    def constructed(self) -> bool:
        return self.family is not None


class _Reader:
    def __init__(self, cp: configparser.ConfigParser, text: str, origin: str):
        self.cp = cp
        self.lines = text.splitlines()
        self.origin = origin

    def line_of(self, section: str, key: str | None = None) -> int | None:
        in_sec = False
        for i, line in enumerate(self.lines, 1):
            s = line.strip()
            if s.startswith("["):
                in_sec = s.strip("[]").strip().lower() == section
                if in_sec and key is None:
                    return i
                continue
            if in_sec and key is not None and re.match(rf"{re.escape(key)}\s*[=:]", s, re.I):
                return i
        return None

    def fail(self, section, key, msg):
        line = self.line_of(section, key)
        where = f"{self.origin}:{line}: " if line else f"{self.origin}: "
        field_ = f"[{section}] {key}" if key else f"[{section}]"
        raise ConfigError(f"{where}{field_}: {msg}")

    def has(self, section, key):
        return self.cp.has_option(section, key)

    def get(self, section, key, default=None):
        if not self.cp.has_option(section, key):
            return default
        return self.cp.get(section, key).strip()

    def real(self, section, key, default=None, *, positive=False, nonneg=False, unit=False):
        raw = self.get(section, key)
        if raw is None:
            if default is None:
                self.fail(section, key, "missing required value")
            return default
        try:
            val = parse_real(raw)
        except (ValueError, ZeroDivisionError):
            self.fail(section, key, f"not a number: {raw!r}")
        if not math.isfinite(float(val)):
            self.fail(section, key, f"must be finite, got {raw!r}")
        if positive and not val > 0:
            self.fail(section, key, f"must be positive, got {raw!r}")
        if nonneg and val < 0:
            self.fail(section, key, f"must be nonnegative, got {raw!r}")
        if unit and not 0 < val < 1:
            self.fail(section, key, f"must lie in (0, 1), got {raw!r}")
        return val

    def integer(self, section, key, default=None, minimum=1):
        raw = self.get(section, key)
        if raw is None:
            return default
        try:
            val = int(raw)
        except ValueError:
            self.fail(section, key, f"not an integer: {raw!r}")
        if val < minimum:
            self.fail(section, key, f"must be at least {minimum}, got {val}")
        return val

    def choice(self, section, key, options, default=None):
        raw = self.get(section, key, default)
        if raw is None:
            self.fail(section, key, f"missing; expected one of {', '.join(options)}")
        if raw not in options:
            self.fail(section, key, f"{raw!r} is not one of {', '.join(options)}")
        return raw


def load_config(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from exc
    return parse_config(text, str(path))


def parse_config(text: str, origin: str = "<config>") -> Scenario:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=origin)
    except configparser.Error as exc:
        raise ConfigError(f"{origin}: {exc}") from exc
    r = _Reader(cp, text, origin)
    known = {"economy", "dividends", "run"}
    for sec in cp.sections():
        if sec not in known:
            r.fail(sec, None, f"unknown section; expected {', '.join(sorted(known))}")
    if not cp.has_section("economy"):
        raise ConfigError(f"{origin}: missing [economy] section")

    E = "economy"
    G = r.real(E, "G", positive=True)
    tech_kind = r.choice(E, "technology", ("cobb_douglas", "cd_plus_log"), "cobb_douglas")
    A = r.real(E, "A", positive=True)
    alpha = r.real(E, "alpha", unit=True)
    if tech_kind == "cobb_douglas":
        delta = r.real(E, "delta", 1, nonneg=True)
        if delta > 1:
            r.fail(E, "delta", "must lie in [0, 1]")
        tech = CobbDouglas(A, alpha, delta)
    else:
        tech = CDPlusLog(A, alpha, r.real(E, "theta", 0, nonneg=True))
    sav_kind = r.choice(E, "savings", ("log", "crra"), "log")
    beta = r.real(E, "beta", unit=True)
    rule = LogSavings(beta) if sav_kind == "log" else CRRASavings(beta, r.real(E, "gamma", 1, positive=True))
    k0 = r.real(E, "k0", 1, positive=True)
    if not (tech.fprime_inf < G):
        r.fail(E, "delta", "need f'(inf) = 1 - delta below G")

    D = "dividends"
    variant = r.choice(D, "variant", ("none", "explicit", "geometric", "constructed"), "none") \
        if cp.has_section(D) else "none"
    declared = r.real(D, "declared_Gd", 0, nonneg=True) if r.has(D, "declared_Gd") else None
    ratio = None if declared is None else declared / G
    family = None
    theta = t0 = None
    if variant == "none":
        divs = no_dividends()
    elif variant == "explicit":
        raw = r.get(D, "values")
        if not raw:
            r.fail(D, "values", "explicit dividends need a comma-separated list")
        vals = []
        for item in raw.replace("\n", ",").split(","):
            if item.strip():
                try:
                    v = parse_real(item)
                except (ValueError, ZeroDivisionError):
                    r.fail(D, "values", f"not a number: {item.strip()!r}")
                if not (math.isfinite(float(v)) and v >= 0):
                    r.fail(D, "values", f"dividends must be finite and nonnegative, got {item.strip()!r}")
                vals.append(v)
        tail = r.choice(D, "tail", ("zero", "geometric"), "zero")
        tail_ratio = r.real(D, "tail_ratio", 0, nonneg=True)
        divs = SequenceDividends(tuple(vals), tail=tail, tail_ratio=tail_ratio, declared_ratio=ratio)
    elif variant == "geometric":
        divs = GeometricDividends(r.real(D, "d0", nonneg=True), r.real(D, "gamma", nonneg=True))
    else:
        if tech_kind != "cobb_douglas" or sav_kind != "log" or float(tech.delta) != 1:
            r.fail(D, "variant", "constructed dividends need cobb_douglas with delta = 1 and log savings")
        fam = r.choice(D, "family", FAMILIES)
        sigma = r.real(D, "sigma", positive=True) if r.has(D, "sigma") or fam != "rho_plus_geometric" else None
        C = r.real(D, "C")
        family = XSequenceSpec(fam, C, sigma, A, alpha, beta, G)
        if r.has(D, "theta"):
            raw = r.get(D, "theta")
            theta = "auto" if raw == "auto" else r.real(D, "theta", nonneg=True)
            if fam != "geometric_unbounded":
                r.fail(D, "theta", "the theta variant needs family = geometric_unbounded")
        t0 = r.integer(D, "t0", None, minimum=0)
        divs = no_dividends()  # replaced once the path is built

    econ = Economy(G, tech, rule, divs, k0)

    R = "run"
    command = r.choice(R, "command", ("simulate", "eqset", "construct", "classify"), "simulate") \
        if r.has(R, "command") else None
    p0 = None
    if r.has(R, "p0"):
        p0 = "constructed" if r.get(R, "p0") == "constructed" else r.real(R, "p0", nonneg=True)
    elif family is not None:
        p0 = "constructed"
    p0_range = None
    if r.has(R, "p0_range"):
        parts = [s for s in r.get(R, "p0_range").split(",") if s.strip()]
        if len(parts) != 3:
            r.fail(R, "p0_range", "expected 'low, high, count'")
        try:
            lo, hi, n = float(parse_real(parts[0])), float(parse_real(parts[1])), int(parts[2])
        except (ValueError, ZeroDivisionError):
            r.fail(R, "p0_range", "expected 'low, high, count'")
        if not (0 <= lo <= hi and n >= 1):
            r.fail(R, "p0_range", "need 0 <= low <= high and count >= 1")
        p0_range = (lo, hi, n)
    horizon = r.integer(R, "horizon", 200)
    tol = float(r.real(R, "tol", Fraction(1, 10**8), positive=True))
    prec_raw = r.get(R, "precision", "auto" if family is not None else "float")
    if prec_raw == "float":
        precision = None
    elif prec_raw == "auto":
        precision = "auto"
    else:
        precision = r.integer(R, "precision", minimum=53)
    return Scenario(economy=econ, family=family, theta=theta, t0=t0, command=command, p0=p0,
                    p0_range=p0_range, horizon=horizon, tol=tol, precision=precision,
                    out=r.get(R, "out"), source=text,
                    raw={s: dict(cp.items(s)) for s in cp.sections()})


# Economy parameters of the three constructed presets: G = 1, k0 = 1 and
# A = 1 / (beta (1 - alpha)).
PRESETS = {
    "fig1": """\
[economy]
G = 1
technology = cobb_douglas
alpha = 2/3
beta = 1/2
A = 6
k0 = 1
savings = log

[dividends]
variant = constructed
family = geometric_unbounded
# C = 1 + rho with rho = alpha / (beta (1 - alpha)) = 4
C = 5
sigma = 11/10

[run]
p0 = constructed
horizon = 200
precision = auto
""",
    "fig2": """\
[economy]
G = 1
technology = cobb_douglas
alpha = 1/3
beta = 2/3
A = 9/4
k0 = 1
savings = log

[dividends]
variant = constructed
family = one_plus_geometric
C = 1
sigma = 9/10

[run]
p0 = constructed
horizon = 200
precision = auto
""",
    "fig3": """\
[economy]
G = 1
technology = cobb_douglas
alpha = 1/3
beta = 2/3
A = 9/4
k0 = 1
savings = log

[dividends]
variant = constructed
family = rho_plus_geometric
# sigma defaults to rho = 3/4
C = 1

[run]
p0 = constructed
horizon = 200
precision = auto
""",
}


def preset(name: str) -> Scenario:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
    return parse_config(PRESETS[name], f"<preset {name}>")
