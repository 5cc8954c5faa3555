from __future__ import annotations

import subprocess
import sys

import numpy as np
import pytest

from olgbubble import kernels
from olgbubble import _kernels_py as pyk

from conftest import fig1_economy, fig2_economy

cyk = pytest.importorskip("olgbubble._kernels", reason="compiled extension not built")


def _args(econ, T, p0, d=None):
    params = kernels.kernel_params(econ)
    if d is None:
        d = np.zeros(T + 1)
    return params, float(econ.k0), float(p0), np.ascontiguousarray(d, dtype=float)


@pytest.mark.parametrize("p0", [0.0, 0.1, 0.2499, 0.26, 0.9])
def test_shoot_parity_pure_bubble(p0):
    econ = fig2_economy()
    T = 300
    params, k0, p0, d = _args(econ, T, p0)
    outs = []
    for mod in (cyk, pyk):
        k = np.empty(T + 1)
        p = np.empty(T + 1)
        code, t_end = mod.shoot(*params, k0, p0, d, T, k, p)
        outs.append((code, t_end, k[: t_end + 1].copy(), p[: t_end + 1].copy()))
    (c1, t1, k1, p1), (c2, t2, k2, p2) = outs
    assert (c1, t1) == (c2, t2)
    np.testing.assert_allclose(k1, k2, rtol=1e-13)
    np.testing.assert_allclose(p1, p2, rtol=1e-12, atol=1e-300)


def test_shoot_parity_with_dividends_and_theta():
    from olgbubble import CDPlusLog, Economy, GeometricDividends, LogSavings

    econ = Economy(1, CDPlusLog(2.25, 1 / 3, 3.0), LogSavings(2 / 3), GeometricDividends(0.01, 0.9))
    T = 200
    d = np.array(econ.dividends.values(T), dtype=float)
    params, k0, _, d = _args(econ, T, 0.0, d)
    for p0 in (0.0, 0.05, 0.5, 1.5):
        res = []
        for mod in (cyk, pyk):
            k = np.empty(T + 1)
            p = np.empty(T + 1)
            code, t_end = mod.shoot(*params, k0, p0, d, T, k, p)
            res.append((code, t_end, k[t_end], p[t_end]))
        assert res[0][:2] == res[1][:2]
        assert res[0][2] == pytest.approx(res[1][2], rel=1e-12)


def test_survival_parity_on_grid():
    econ = fig1_economy()
    T = 120
    params, k0, _, d = _args(econ, T, 0.0, np.full(T + 1, 0.01))
    p0s = np.linspace(0, 1.2, 2001)
    out = []
    for mod in (cyk, pyk):
        st = np.empty(len(p0s), dtype=np.int32)
        te = np.empty(len(p0s), dtype=np.int32)
        mod.survival(*params, k0, p0s, d, T, st, te)
        out.append((st, te))
    np.testing.assert_array_equal(out[0][0], out[1][0])
    np.testing.assert_array_equal(out[0][1], out[1][1])


def test_survival_matches_shoot():
    econ = fig2_economy()
    T = 200
    params, k0, _, d = _args(econ, T, 0.0)
    p0s = np.linspace(0, 0.6, 301)
    st = np.empty(len(p0s), dtype=np.int32)
    te = np.empty(len(p0s), dtype=np.int32)
    kernels.survival(*params, k0, p0s, d, T, st, te)
    for i in range(0, 301, 25):
        k = np.empty(T + 1)
        p = np.empty(T + 1)
        code, t_end = kernels.shoot(*params, k0, float(p0s[i]), d, T, k, p)
        assert (code, t_end) == (st[i], te[i])


def test_backend_selection_falls_back_to_python():
    code = ("import sys; sys.modules['olgbubble._kernels'] = None; "
            "import olgbubble.kernels as k; print(k.BACKEND)")
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "python"


def test_kernel_params_only_for_supported_economies():
    from olgbubble import CobbDouglas, CRRASavings, Economy

    assert kernels.kernel_params(fig2_economy()) is not None
    assert kernels.kernel_params(Economy(1, CobbDouglas(2, 0.3), CRRASavings(0.5, 0.5))) is None
