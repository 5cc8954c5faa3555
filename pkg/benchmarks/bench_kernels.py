"""Compare the compiled and pure-Python shooting kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times a single forward shot, a 10^4-price survival scan and one full
equilibrium-set bisection on the pure-bubble economy, for each backend
that is importable.
"""
from __future__ import annotations

import argparse
import json
import sys
import timeit
from fractions import Fraction as F

import numpy as np

from olgbubble import CobbDouglas, Economy, LogSavings
from olgbubble import _kernels_py
from olgbubble.kernels import kernel_params

try:
    from olgbubble import _kernels as _cython
except ImportError:
    _cython = None

T = 400
ECON = Economy(1, CobbDouglas(F(9, 4), F(1, 3)), LogSavings(F(2, 3)))


def cases(mod):
    params = kernel_params(ECON)
    d = np.zeros(T + 1)
    k_out, p_out = np.empty(T + 1), np.empty(T + 1)
    p0s = np.linspace(0, 0.75, 10_000)
    status = np.empty(len(p0s), dtype=np.int32)
    tend = np.empty(len(p0s), dtype=np.int32)

    def shoot():
        mod.shoot(*params, 1.0, 0.2, d, T, k_out, p_out, 1e-12)

    def survival():
        mod.survival(*params, 1.0, p0s, d, T, status, tend, 1e-12)

    def bisect():
        lo, hi = 0.0, 0.75
        while hi - lo > 1e-8:
            mid = (lo + hi) / 2
            code, _ = mod.shoot(*params, 1.0, mid, d, T, k_out, p_out, 1e-12)
            lo, hi = (lo, mid) if code == 2 else (mid, hi)

    return {"shoot": shoot, "survival_1e4": survival, "bisect_tol1e-8": bisect}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="print machine-readable results")
    args = ap.parse_args(argv)

    backends = {"python": _kernels_py}
    if _cython is not None:
        backends["cython"] = _cython
    results = {}
    for name, mod in backends.items():
        for case, fn in cases(mod).items():
            number = 1 if (name == "python" and case == "survival_1e4") else 10
            best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
            results.setdefault(case, {})[name] = best

    if args.json:
        print(json.dumps(results, indent=2, sort_keys=True))
        return 0
    print(f"horizon T={T}; best of {args.repeat} repeats, seconds per call")
    print(f"{'case':<16}{'python':>12}{'cython':>12}{'speedup':>10}")
    for case, row in results.items():
        py, cy = row["python"], row.get("cython")
        speed = f"{py / cy:9.1f}x" if cy else "      n/a"
        cy_s = f"{cy:12.2e}" if cy else f"{'missing':>12}"
        print(f"{case:<16}{py:12.2e}{cy_s}{speed}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
