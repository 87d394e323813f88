import json
import math

import jsonschema
import pytest

from octomaxwell.reports import (
    REPORT_COLUMNS,
    convergence_order,
    dumps,
    duality_report,
    load_schema,
    report_csv,
    residual_report,
)
from octomaxwell.scenarios import SCENARIOS, build_scenario


def orders(report, channel):
    return [r["convergence_order"] for r in report["rows"] if r["residual_name"] == channel][1:]


def test_convergence_order_formula():
    assert convergence_order(4e-2, 1e-2, 0.2, 0.1) == pytest.approx(2.0)
    assert convergence_order(0.0, 1e-2, 0.2, 0.1) is None
    assert convergence_order(1e-12, 1e-13, 0.2, 0.1) is None


def test_unknown_scenario():
    with pytest.raises(KeyError):
        build_scenario("nope", 8)


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_every_scenario_builds_and_reports(name):
    rep = residual_report(name, 16)
    jsonschema.validate(json.loads(dumps(rep)), load_schema("residual_report"))
    assert {r["residual_name"] for r in rep["rows"]} >= {"r_gauss_e", "r_gauss_m", "r_faraday", "r_ampere"}


def test_zero_scenario_is_exactly_zero():
    rep = residual_report("zero", 16, refine=1)
    assert all(r["interior_max"] == 0 and r["convergence_order"] is None for r in rep["rows"])


def test_plane_wave_orders():
    rep = residual_report("plane-wave", 16, refine=2)
    for ch in ("r_faraday", "r_ampere"):
        assert all(1.9 <= o <= 2.1 for o in orders(rep, ch))
    assert rep["two_path_gap"] <= 1e-12


@pytest.mark.parametrize("name,channel", [("monopole-gauss", "r_gauss_m"), ("electric-gauss", "r_gauss_e")])
def test_manufactured_gauss_orders(name, channel):
    rep = residual_report(name, 32, refine=1)
    assert 1.9 <= orders(rep, channel)[0] <= 2.1


def test_static_gauss_order():
    rep = residual_report("static-gauss", 16, refine=2)
    assert all(1.9 <= o <= 2.1 for o in orders(rep, "r_gauss_e"))


def test_potential_wave_accepts_pair_coefficients():
    a = build_scenario("potential-wave", 16, coefficients=[[1, 0], [0, 0.5], [0.3, 0], [-0.2, 0.4]])
    b = build_scenario("potential-wave", 16)
    assert (a.grid.Y == b.grid.Y).all()
    with pytest.raises(ValueError):
        build_scenario("potential-wave", 16, coefficients=[1, 2])


def test_csv_layout():
    text = report_csv(residual_report("plane-wave", 16, refine=1))
    lines = text.splitlines()
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert all(len(line.split(",")) == len(REPORT_COLUMNS) for line in lines)


def test_duality_report_sweep_and_mirror():
    thetas = [0.0, math.pi / 6, math.pi / 4, math.pi / 2, 1.0, 3.0]
    rep = duality_report("electric-gauss", 16, thetas)
    jsonschema.validate(json.loads(dumps(rep)), load_schema("duality_report"))
    assert rep["passed"]
    half = [e for e in rep["entries"] if e["theta"] == pytest.approx(math.pi / 2)][0]
    assert half["mirror_scenario"] == "monopole-gauss" and half["mirror_field_gap"] <= 1e-12
    back = duality_report("monopole-gauss", 16, [math.pi / 2])
    assert back["passed"]


def test_dumps_is_stable():
    rep = residual_report("plane-wave", 16)
    assert dumps(rep) == dumps(residual_report("plane-wave", 16))
