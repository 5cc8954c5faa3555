"""Command-line front end.

    olgbubble simulate  --config run.ini --out results/
    olgbubble eqset     --config run.ini --out results/ --horizon 400 --tol 1e-8
    olgbubble construct --preset fig1 --out results/
    olgbubble classify  --preset fig2 --out results/
    olgbubble preset fig3 --out results/

Exit codes: 0 success, 1 invalid configuration, 2 path failed low,
3 path failed high, 4 infeasible closed-form construction.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from ._prec import MPFR
from .closedform import ConstructionError, construct, construct_theta, roundtrip
from .config import PRESETS, ConfigError, Scenario, load_config, preset
from .dynamics import bubbleless_steady_states, shooting_bits, simulate, trajectory_from_path
from .equilibria import NoSurvivorError, bubble_test, classify, equilibrium_set, regime_report

EXIT_OK, EXIT_CONFIG, EXIT_LOW, EXIT_HIGH, EXIT_CONSTRUCT = 0, 1, 2, 3, 4
STATUS_EXIT = {"completed": EXIT_OK, "fail_low": EXIT_LOW, "fail_high": EXIT_HIGH}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (bool, type(None), str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction, MPFR)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    return str(obj)


def write_json(path: Path, obj) -> None:
    text = json.dumps(_jsonify(obj), sort_keys=True, indent=2, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")


# --------------------------------------------------------------------------
# Scenario materialisation
# --------------------------------------------------------------------------


class _Built:
    """Economy and initial price ready for simulation, plus construction artefacts."""

    def __init__(self, econ, p0, precision, path=None, theta=None):
        self.econ = econ
        self.p0 = p0
        self.precision = precision
        self.path = path
        self.theta = theta


def _build(sc: Scenario, T: int, precision="config") -> _Built:
    """``precision`` is ``"config"`` (use the scenario's), ``"float"``, ``"auto"`` or bits."""
    precision = sc.precision if precision == "config" else precision
    if precision == "float":
        precision = None
    if not sc.constructed:
        if precision == "auto":
            precision = None
        p0 = sc.p0
        return _Built(sc.economy, p0, precision)

    def make(bits):
        if sc.theta is None:
            path = construct(sc.family, sc.economy.k0, T, precision=bits)
            return path, None, path.economy(), path.k, path.p
        th_val = None if sc.theta == "auto" else sc.theta
        probe = construct_theta(construct(sc.family, sc.economy.k0, T), th_val, sc.t0)
        base = construct(sc.family, sc.economy.k0, T + probe.t0, precision=bits)
        th = construct_theta(base, probe.theta, probe.t0)
        econ, k, p = th.shifted()
        return base, th, econ, k, p

    path, th, econ, k, p = make(None)
    bits = precision
    if precision == "auto":
        bits = shooting_bits(econ, k, p)
    if bits is not None:
        path, th, econ, k, p = make(bits)
    p0 = p[0] if sc.p0 in (None, "constructed") else sc.p0
    return _Built(econ, p0, bits, path, th)


def _out_dir(args, sc: Scenario) -> Path:
    out = Path(args.out or sc.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _horizon(args, sc):
    return args.horizon if args.horizon is not None else sc.horizon


def _tol(args, sc):
    return args.tol if args.tol is not None else sc.tol


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_simulate(sc: Scenario, args) -> int:
    out = _out_dir(args, sc)
    T = _horizon(args, sc)
    built = _build(sc, T)
    if sc.p0_range is not None:
        lo, hi, n = sc.p0_range
        rows = ["p0,status,fail_date,k_T,p_T"]
        for p0 in np.linspace(lo, hi, n):
            tr = simulate(built.econ, float(p0), T, precision=built.precision).as_float()
            fd = "" if tr.fail_date is None else str(tr.fail_date)
            rows.append(f"{format(float(p0), '.17g')},{tr.status},{fd},"
                        f"{format(float(tr.k[-1]), '.17g')},{format(float(tr.p[-1]), '.17g')}")
        (out / "sweep.csv").write_text("\n".join(rows) + "\n", encoding="utf-8", newline="\n")
        write_json(out / "summary.json", {"p0_range": list(sc.p0_range), "T": T})
        return EXIT_OK
    if built.p0 is None:
        raise ConfigError("[run] p0: simulate needs p0 (a number or 'constructed') or p0_range")
    traj = simulate(built.econ, built.p0, T, precision=built.precision)
    traj.to_csv(out / "trajectory.csv")
    write_json(out / "summary.json", traj.summary())
    return STATUS_EXIT[traj.status]


def cmd_eqset(sc: Scenario, args) -> int:
    out = _out_dir(args, sc)
    T, tol = _horizon(args, sc), _tol(args, sc)
    built = _build(sc, T, precision="float")
    try:
        es = equilibrium_set(built.econ, T, tol)
    except NoSurvivorError as exc:
        raise ConfigError(f"[run] horizon/tol: {exc}") from exc
    write_json(out / "eqset.json", es.to_dict())
    es.lower.to_csv(out / "trajectory_lower.csv")
    es.upper.to_csv(out / "trajectory_upper.csv")
    return EXIT_OK


def cmd_construct(sc: Scenario, args) -> int:
    if not sc.constructed:
        raise ConfigError("[dividends] variant: construct needs variant = constructed")
    out = _out_dir(args, sc)
    T = _horizon(args, sc)
    built = _build(sc, T, precision="float")
    path = built.path
    report = {"construction": path.report()}
    if built.theta is not None:
        th = built.theta
        report["theta"] = {"theta": th.theta, "t0": th.t0, "k_star": th.k_star, "R_star": th.R_star,
                           "probed": [list(x) for x in th.probed]}
        rt = roundtrip(th)
        econ, k, p = th.shifted()
        traj = trajectory_from_path(econ, list(k), list(p), T=len(k) - 1)
    else:
        rt = roundtrip(path)
        traj = path.trajectory()
    report["roundtrip"] = rt.to_dict()
    report["roundtrip"]["passed"] = rt.passed()
    traj.to_csv(out / "trajectory.csv")
    write_json(out / "verify.json", report)
    return EXIT_OK


def cmd_classify(sc: Scenario, args) -> int:
    out = _out_dir(args, sc)
    T, tol = _horizon(args, sc), _tol(args, sc)
    built = _build(sc, T)
    econ_f = built.econ.at_precision(None)
    ss = bubbleless_steady_states(econ_f)
    es = None
    if built.p0 is None:
        try:
            es = equilibrium_set(econ_f, T, tol)
        except NoSurvivorError as exc:
            raise ConfigError(f"[run] horizon/tol: {exc}") from exc
        traj = es.upper
    else:
        traj = simulate(built.econ, built.p0, T, precision=built.precision)
    cls = classify(traj, ss, built.econ)
    bt = bubble_test(traj)
    rep = regime_report(built.econ, ss, T, eqset=es).to_dict()
    rep["classification"] = cls.to_dict()
    rep["bubble_test"] = bt.to_dict()
    rep["steady_states"] = ss.to_dict()
    traj.to_csv(out / "trajectory.csv")
    write_json(out / "summary.json", traj.summary())
    write_json(out / "regime.json", rep)
    return STATUS_EXIT[traj.status]


COMMANDS = {"simulate": cmd_simulate, "eqset": cmd_eqset, "construct": cmd_construct,
            "classify": cmd_classify}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="olgbubble", description="OLG economy with capital and a dividend-paying asset")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--config", help="scenario INI file")
        src.add_argument("--preset", choices=sorted(PRESETS), help="built-in scenario")
        p.add_argument("--out", help="output directory (default: [run] out or .)")
        p.add_argument("--horizon", type=int, help="horizon T")
        p.add_argument("--tol", type=float, help="bisection tolerance")

    for name in COMMANDS:
        common(sub.add_parser(name, help=f"{name} a scenario"))
    pp = sub.add_parser("preset", help="run a built-in scenario (simulate and classify)")
    pp.add_argument("name", choices=sorted(PRESETS))
    pp.add_argument("--out")
    pp.add_argument("--horizon", type=int)
    pp.add_argument("--tol", type=float)
    pp.add_argument("--show", action="store_true", help="print the preset's INI text and exit")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "preset":
            if args.show:
                sys.stdout.write(PRESETS[args.name])
                return EXIT_OK
            sc = preset(args.name)
            code = cmd_simulate(sc, args)
            if code == EXIT_OK:
                code = cmd_classify(sc, args)
            return code
        if args.config is None and args.preset is None:
            raise ConfigError("one of --config or --preset is required")
        sc = load_config(args.config) if args.config else preset(args.preset)
        if args.horizon is not None and args.horizon < 1:
            raise ConfigError("--horizon must be a positive integer")
        if args.tol is not None and not (args.tol > 0):
            raise ConfigError("--tol must be positive")
        return COMMANDS[args.command](sc, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConstructionError as exc:
        print(f"error: construction infeasible: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
