"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line with the measured value and its
tolerance; the lines are printed in the pytest terminal summary (see
``conftest.py``) and also when this file is run directly::

    python tests/test_acceptance.py
"""

from __future__ import annotations

import filecmp
import math
import tempfile
import time
from pathlib import Path

import numpy as np

from octomaxwell.calculus import Lattice4D, apply_D_matrix, apply_D_time, apply_D_wick
from octomaxwell.checks import brute_force_table, check_alternativity, check_norm_composition
from octomaxwell.config import load_config, solver_config
from octomaxwell.fdtd import SolverConfig, analytic_error, run
from octomaxwell.maxwell import eight_component_split, extract_state, residuals, residuals_from_components, time_derivatives
from octomaxwell.octonion import Octonion, associator, basis, mul
from octomaxwell.reports import duality_report, residual_report
from octomaxwell.representation import RepMatrix, pi
from octomaxwell.scenarios import random_trig_field

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
RESULTS: list[str] = []


def record(number: int, title: str, passed: bool, detail: str) -> bool:
    RESULTS.append(f"criterion {number} {'PASS' if passed else 'FAIL'}: {title} ({detail})")
    print(RESULTS[-1])
    return passed


def _orders(report, channel):
    return [r["convergence_order"] for r in report["rows"] if r["residual_name"] == channel][1:]


def test_criterion_1_multiplication_table():
    start = time.perf_counter()
    oracle = brute_force_table()
    mismatches = sum(
        not np.array_equal(mul(basis(a), basis(b)).y.astype(np.int64), oracle[a, b])
        for a in range(8)
        for b in range(8)
    )
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 1.0
    assert record(1, "multiplication table", ok, f"{mismatches} of 64 mismatched, {elapsed:.3f} s < 1 s")


def test_criterion_2_norm_composition():
    r = check_norm_composition(samples=1000)
    ok = r.passed and r.worst_error <= 1e-12
    assert record(2, "norm composition over 1000 pairs", ok, f"worst relative {r.worst_error:.3g} <= 1e-12")


def test_criterion_3_nonassociativity_and_alternativity():
    witness = associator(basis(1), basis(2), basis(4)) == -2.0 * basis(5)
    alt = check_alternativity(samples=1000)
    ok = witness and alt.worst_error <= 1e-12
    assert record(
        3, "associator witness and alternativity", ok,
        f"(e1,e2,e4) = -2 e5 exact: {witness}; alternativity worst {alt.worst_error:.3g} <= 1e-12",
    )


def test_criterion_4_representation():
    table = [["+0", "-3", "-2", "-1"], ["+3", "+0", "+1", "-2"], ["+2", "-1", "+0", "+3"], ["+1", "+2", "-3", "+0"]]
    Y = np.array([1 + 10j, 2 + 20j, 3 + 30j, 4 + 40j])  # distinct so every entry is identifiable
    y = np.array([1, 2, 3, 4, 20, 30, 40, 10.0])
    m = pi(Octonion(y)).m
    pattern_ok = all(
        m[i, j] == (1 if table[i][j][0] == "+" else -1) * Y[int(table[i][j][1])] for i in range(4) for j in range(4)
    )
    mult_ok = all(pi(basis(a)) @ pi(basis(b)) == pi(mul(basis(a), basis(b))) for a in range(4) for b in range(4))
    witness = pi(basis(1)) @ pi(basis(4)) == -pi(mul(basis(1), basis(4)))
    ok = pattern_ok and mult_ok and witness and pi(basis(1)) @ pi(basis(4)) == RepMatrix.identity().scale(-1j)
    assert record(
        4, "representation pattern", ok,
        f"16-entry table {pattern_ok}, 16 quaternion products {mult_ok}, pi(e1)pi(e4) = -pi(e1e4) {witness}",
    )


def test_criterion_5_two_path_derivative():
    start = time.perf_counter()
    lat = Lattice4D((16,) * 4, (2 * math.pi / 16,) * 4)
    worst = 0.0
    for seed in range(5):
        f = random_trig_field(lat, np.random.default_rng(seed))
        gap = np.abs(apply_D_matrix(f).coefficients - apply_D_time(f).coefficients)
        worst = max(worst, float(gap[(slice(None),) + lat.interior(1)].max()))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-13 and elapsed < 10.0
    assert record(5, "matrix path equals time path, 5 fields on 16^4", ok, f"max gap {worst:.3g} <= 1e-13, {elapsed:.2f} s < 10 s")


def test_criterion_6_octonion_equation_is_maxwell():
    lat = Lattice4D((8, 12, 10, 8), (0.2, 0.3, 0.25, 0.35))
    worst = 0.0
    for seed in range(5):
        f = random_trig_field(lat, np.random.default_rng(100 + seed))
        dO = apply_D_wick(f)
        a = residuals_from_components(eight_component_split(dO)).stacked()
        b = residuals(extract_state(f, dO), *time_derivatives(f)).stacked()
        worst = max(worst, float(np.max(np.abs(a - b))))
    rep = residual_report("plane-wave", 16, refine=2)
    orders = {}
    for ch in ("r_gauss_e", "r_gauss_m", "r_faraday", "r_ampere"):
        got = _orders(rep, ch)
        if all(o is not None for o in got):
            orders[ch] = got
    conv_ok = bool(orders) and all(abs(o - 2.0) <= 0.1 for v in orders.values() for o in v)
    ok = worst <= 1e-12 and conv_ok
    shown = ", ".join(f"{k} {v[0]:.3f}/{v[1]:.3f}" for k, v in orders.items())
    assert record(6, "eight components equal residuals; plane wave order 2", ok, f"gap {worst:.3g} <= 1e-12; orders {shown}")


def test_criterion_7_duality_invariance():
    thetas = [0.0, math.pi / 6, math.pi / 4, math.pi / 2, 1.0, 3.0]
    worst_inv = worst_comp = 0.0
    passed = True
    for name, n in (("electric-gauss", 32), ("plane-wave", 16), ("potential-wave", 16)):
        rep = duality_report(name, n, thetas)
        passed = passed and rep["passed"]
        worst_inv = max(worst_inv, max(e["invariance_rel_error"] for e in rep["entries"]))
        worst_comp = max(worst_comp, max(e["composition_error"] for e in rep["entries"]))
    ok = passed and worst_inv <= 1e-12 and worst_comp <= 1e-12
    assert record(
        7, "duality invariance at 6 angles, 3 scenarios", ok,
        f"invariance {worst_inv:.3g}, composition {worst_comp:.3g}, both <= 1e-12",
    )


def test_criterion_8_continuity_and_wave_equation():
    rep = residual_report("potential-wave", 16, refine=3)
    orders = {ch: _orders(rep, ch) for ch in ("continuity_e", "continuity_m", "dalembertian_y0")}
    ok = all(o is not None and o >= 1.9 for v in orders.values() for o in v)
    low = min(o for v in orders.values() for o in v if o is not None)
    assert record(8, "continuity and box(Y0) converge", ok, f"three refinements, min order {low:.3f} >= 1.9")


def test_criterion_9_solver():
    start = time.perf_counter()
    pulse = solver_config(load_config(CONFIGS / "current_pulse.cfg"))
    res = run(pulse)
    gauss = res.max_gauss_drift
    drift = max(r.duality_drift for r in res.rows)

    errs = []
    for n in (16, 32, 64):
        h = 2 * math.pi / n
        c = SolverConfig((n, 4, 4), (h, h, h), steps=4 * n, dt=h / 4, scenario="plane-wave")
        r = run(c)
        drift = max(drift, max(row.duality_drift for row in r.rows))
        errs.append(analytic_error(c, r.final, norm="rms"))
    order = min(math.log2(errs[i] / errs[i + 1]) for i in range(2))

    wave = solver_config(load_config(CONFIGS / "plane_wave.cfg"))
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp) / "a", Path(tmp) / "b"
        same = run(wave, a).csv_text() == run(wave, b).csv_text()
        names = sorted(p.name for p in a.iterdir())
        _, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
        same = same and not mismatch and not errors
    elapsed = time.perf_counter() - start
    ok = gauss <= 1e-12 and order >= 1.9 and drift <= 1e-12 and same and elapsed < 60.0
    assert record(
        9, "solver demonstrations", ok,
        f"Gauss drift {gauss:.3g}, wave L2 order {order:.3f}, duality drift {drift:.3g}, "
        f"byte-identical {same}, {elapsed:.1f} s < 60 s",
    )


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
