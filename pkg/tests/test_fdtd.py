import json
import math

import numpy as np
import pytest

from octomaxwell.fdtd import (
    DIAGNOSTICS_HEADER,
    CFLError,
    Grid,
    Sources,
    SolverConfig,
    analytic_error,
    default_cfl_limit,
    initial_state,
    run,
    step,
)

TWO_PI = 2 * math.pi


def wave_config(n, steps=None, **kw):
    h = TWO_PI / n
    return SolverConfig((n, 4, 4), (h, h, h), steps=steps or 4 * n, dt=h / 4, scenario="plane-wave", **kw)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig((8, 8, 8), (1, 1, 1), steps=0)
    with pytest.raises(ValueError):
        SolverConfig((8, 8), (1, 1, 1), steps=1)
    with pytest.raises(ValueError):
        SolverConfig((8, 8, 8), (1, 1, 1), steps=1, scenario="nope")
    c = SolverConfig((8, 8, 8), (0.5, 0.5, 0.5), steps=3)
    assert c.dt == pytest.approx(default_cfl_limit((0.5,) * 3))


def test_cfl_guard_and_override():
    c = SolverConfig((8, 8, 8), (0.5,) * 3, steps=1, dt=1.0)
    with pytest.raises(CFLError):
        run(c)
    ok = SolverConfig((8, 8, 8), (0.5,) * 3, steps=1, dt=1.0, allow_cfl_violation=True)
    assert len(run(ok).rows) == 2


def test_discrete_div_curl_vanishes():
    g = Grid((6, 7, 8), (0.3, 0.2, 0.4))
    F = np.random.default_rng(0).normal(size=(3,) + g.n)
    assert np.max(np.abs(g.div_faces(g.curl_edges_to_faces(F)))) < 1e-12
    assert np.max(np.abs(g.div_edges(g.curl_faces_to_edges(F)))) < 1e-12


def test_vacuum_stays_zero():
    r = run(SolverConfig((6, 6, 6), (1, 1, 1), steps=5, scenario="vacuum"))
    assert all(row.energy == 0 for row in r.rows)


def test_plane_wave_converges_at_second_order():
    errs = []
    for n in (16, 32, 64):
        c = wave_config(n, duality_theta=None)
        errs.append(analytic_error(c, run(c).final))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert all(o >= 1.9 for o in orders), orders


def test_plane_wave_energy_is_conserved():
    r = run(wave_config(32))
    e = [row.energy for row in r.rows]
    assert max(abs(v - e[0]) for v in e) <= 1e-12 * e[0]


def test_gauss_drift_for_divergence_free_currents():
    c = SolverConfig((12, 12, 8), (0.25,) * 3, steps=60, scenario="current-pulse",
                     params={"electric": 1.0, "magnetic": 0.7})
    r = run(c)
    assert r.max_gauss_drift <= 1e-12
    assert max(row.source_work != 0 for row in r.rows)


def test_static_charge_residual_does_not_move():
    c = SolverConfig((8, 8, 8), (0.25,) * 3, steps=20, scenario="static-charge", params={"magnetic": 0.5})
    r = run(c)
    assert r.max_gauss_drift == 0.0
    assert np.max(np.abs(r.gauss_initial["e_nodes"])) > 0.1


@pytest.mark.parametrize("theta", [0.3, math.pi / 2, 1.0, 3.0])
def test_stepping_commutes_with_duality_rotation(theta):
    c = SolverConfig((10, 10, 6), (0.3,) * 3, steps=40, scenario="current-pulse",
                     params={"electric": 1.0, "magnetic": -0.4}, duality_theta=theta)
    r = run(c)
    assert max(row.duality_drift for row in r.rows) <= 1e-12


def test_step_matches_manual_loop():
    c = wave_config(16, steps=3, duality_theta=None)
    g = Grid(c.n, c.h)
    sc = c.build_scenario()
    s = initial_state(g, sc, c.dt)
    for _ in range(3):
        s = step(g, s, c.dt, Sources(g, sc))
    assert s.max_difference(run(c).final) == 0.0


def test_outputs_are_deterministic(tmp_path):
    c = wave_config(16, steps=8, snapshot_every=4)
    a = run(c, tmp_path / "a")
    b = run(c, tmp_path / "b")
    assert a.csv_text() == b.csv_text()
    assert a.snapshots == [0, 4, 8]
    for p in sorted((tmp_path / "a").iterdir()):
        assert p.read_bytes() == (tmp_path / "b" / p.name).read_bytes()


def test_csv_and_snapshot_layout(tmp_path):
    c = wave_config(16, steps=4, snapshot_every=4, diagnostics_every=2)
    r = run(c, tmp_path)
    lines = r.csv_text().splitlines()
    assert lines[0] == ",".join(DIAGNOSTICS_HEADER)
    times = [float(line.split(",")[1]) for line in lines[1:]]
    assert times == sorted(times) and len(times) == 3
    meta = json.loads((tmp_path / "snapshot_000004.json").read_text())
    arr = np.fromfile(tmp_path / meta["files"][0], dtype=meta["dtype"]).reshape(meta["dims"])
    assert np.array_equal(arr, r.final.edge_E[0])


def test_plane_wave_rms_error_converges():
    errs = []
    for n in (16, 32, 64):
        c = wave_config(n, duality_theta=None)
        errs.append(analytic_error(c, run(c).final, norm="rms"))
    assert all(math.log2(errs[i] / errs[i + 1]) >= 1.9 for i in range(2))
    with pytest.raises(ValueError):
        analytic_error(c, run(c).final, norm="l1")


def test_magnetic_pulse_is_rotated_electric_pulse():
    def final(electric, magnetic):
        c = SolverConfig((10, 10, 4), (0.3,) * 3, steps=30, scenario="current-pulse",
                         params={"electric": electric, "magnetic": magnetic}, duality_theta=None)
        return run(c).final

    e_only, m_only = final(1.0, 0.0), final(0.0, 1.0)
    assert np.max(np.abs(m_only.edge_E)) > 1e-3
    assert e_only.rotated(math.pi / 2).max_difference(m_only) <= 1e-12


def test_energy_balance_tracks_source_work():
    # dU/dt + source work -> 0 under refinement on a fixed box
    balances = []
    for n in (8, 16, 32):
        h = 3.2 / n
        c = SolverConfig((n, n, 4), (h,) * 3, steps=4 * n, scenario="current-pulse",
                         params={"electric": 1.0, "magnetic": 0.5}, duality_theta=None)
        rows = run(c).rows
        bal = max(
            abs((b.energy - a.energy) / c.dt + 0.5 * (a.source_work + b.source_work))
            for a, b in zip(rows, rows[1:])
        )
        balances.append(bal / max(abs(r.source_work) for r in rows))
    assert balances[0] < 0.1 and balances[1] < balances[0] / 3 and balances[2] < balances[1] / 3
