import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from octomaxwell.cli import main, parse_octonion, parse_theta, UsageError
from octomaxwell.reports import load_schema

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("a,b,expected", [("e1", "e2", "e3"), ("e0", "e5", "e5"), ("e5", "e4", "e3"), ("e2", "e1", "-e3")])
def test_mul_examples(capsys, a, b, expected):
    code, out, _ = run_cli(capsys, "mul", a, b)
    assert code == 0 and out.strip() == expected


def test_mul_tuple_and_json(capsys):
    code, out, _ = run_cli(capsys, "mul", "1,0,0,0,0,0,0,0.5", "0,2,0,0,0,0,0,0", "--json")
    data = json.loads(out)
    jsonschema.validate(data, load_schema("mul_result"))
    assert data["text"] == "2 e1 + e4"


@pytest.mark.parametrize("literal,fragment", [("e8", "position 2"), ("1,2,x,4,5,6,7,8", "position 5"), ("1,2", "8 comma")])
def test_mul_parse_errors(capsys, literal, fragment):
    code, _, err = run_cli(capsys, "mul", literal, "e1")
    assert code == 2 and fragment in err


def test_parse_helpers():
    assert parse_octonion("-e7").y[7] == -1
    assert parse_theta("pi/4") == pytest.approx(0.7853981633974483)
    assert parse_theta("2*pi") == pytest.approx(6.283185307179586)
    assert parse_theta("-pi") == pytest.approx(-3.141592653589793)
    with pytest.raises(UsageError):
        parse_octonion("e")


def test_algebra_check(capsys):
    code, out, _ = run_cli(capsys, "algebra-check", "--json")
    data = json.loads(out)
    jsonschema.validate(data, load_schema("algebra_check"))
    assert code == 0 and data["passed"]
    names = {c["name"] for c in data["checks"]}
    assert {"multiplication_table", "antisymmetry", "norm_composition", "alternativity", "subalgebra_closure"} <= names


def test_algebra_check_fault_hook(capsys):
    code, out, _ = run_cli(capsys, "algebra-check", "--corrupt", "123", "--json")
    data = json.loads(out)
    table = [c for c in data["checks"] if c["name"] == "multiplication_table"][0]
    assert code == 1 and not table["passed"]
    code, _, _ = run_cli(capsys, "algebra-check", "--corrupt", "12")
    assert code == 2


@pytest.mark.parametrize("argv", [["rep-show", "1"], ["rep", "show", "1"]])
def test_rep_show(capsys, argv):
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0 and "pi(e1)" in out and "agrees: yes" in out
    assert run_cli(capsys, "rep-show", "9")[0] == 2


def test_residual_csv_and_json(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "residual", "--scenario", "plane-wave", "--n", "16", "--refine", "2")
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    orders = [float(r[5]) for r in rows if r[2] in ("r_faraday", "r_ampere") and r[5]]
    assert code == 0 and len(orders) == 4 and all(1.9 <= o <= 2.1 for o in orders)
    dest = tmp_path / "r.json"
    code, _, _ = run_cli(capsys, "residual", "--scenario", "zero", "--json", "--out", str(dest))
    data = json.loads(dest.read_text())
    jsonschema.validate(data, load_schema("residual_report"))
    assert all(r["interior_max"] == 0 for r in data["rows"])


def test_residual_from_config(capsys):
    code, out, _ = run_cli(capsys, "residual", "--config", str(CONFIGS / "potential_wave.cfg"), "--json")
    data = json.loads(out)
    assert code == 0 and data["n"] == [16, 32, 64]


def test_residual_errors(capsys):
    assert run_cli(capsys, "residual", "--scenario", "nope")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["residual", "--n", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["residual", "--bogus"])
    assert exc.value.code == 2
    code, _, err = run_cli(capsys, "residual", "--scenario", "plane-wave", "--n", "2")
    assert code == 2 and "error" in err


def test_duality(capsys):
    code, out, _ = run_cli(capsys, "duality", "--scenario", "electric-gauss", "--n", "16", "--theta", "0", "--json")
    assert code == 0 and json.loads(out)["entries"][0]["invariance_rel_error"] == 0
    code, out, _ = run_cli(capsys, "duality", "--n", "16", "--sweep", "--json")
    data = json.loads(out)
    jsonschema.validate(data, load_schema("duality_report"))
    assert code == 0 and data["passed"] and len(data["entries"]) >= 6


def test_dalembert(capsys):
    code, out, _ = run_cli(capsys, "dalembert", "--json")
    data = json.loads(out)
    assert code == 0
    assert {r["residual_name"] for r in data["rows"]} == {"continuity_e", "continuity_m", "dalembertian_y0"}
    assert run_cli(capsys, "dalembert", "--scenario", "electric-gauss")[0] == 2


def test_simulate(capsys, tmp_path):
    out_dir = tmp_path / "run"
    code, _, _ = run_cli(capsys, "simulate", "--config", str(CONFIGS / "plane_wave.cfg"), "--out", str(out_dir))
    assert code == 0
    summary = json.loads((out_dir / "summary.json").read_text())
    jsonschema.validate(summary, load_schema("simulate_summary"))
    assert summary["max_energy_drift"] <= 1e-12 and summary["max_duality_drift"] <= 1e-12
    for name in summary["files"]:
        assert (out_dir / name).is_file()
    snap = json.loads((out_dir / "snapshot_000128.json").read_text())
    jsonschema.validate(snap, load_schema("snapshot"))
    times = [float(line.split(",")[1]) for line in (out_dir / "diagnostics.csv").read_text().splitlines()[1:]]
    assert all(b > a for a, b in zip(times, times[1:]))


def test_simulate_errors(capsys, tmp_path):
    code, _, err = run_cli(capsys, "simulate", "--config", str(tmp_path / "missing.cfg"), "--out", str(tmp_path))
    assert code == 2 and "missing.cfg" in err
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--config", str(CONFIGS / "plane_wave.cfg"), "--out", str(tmp_path), "--steps", "0"])
    assert exc.value.code == 2
    fast = tmp_path / "fast.cfg"
    fast.write_text(
        '[scenario]\nname = "plane-wave"\n[lattice]\nn = [16, 4, 4]\nh = 0.1\n[time]\nsteps = 2\ndt = 1.0\n'
    )
    code, _, err = run_cli(capsys, "simulate", "--config", str(fast), "--out", str(tmp_path / "o"))
    assert code == 2 and "CFL" in err
    code, _, _ = run_cli(
        capsys, "simulate", "--config", str(fast), "--out", str(tmp_path / "o"), "--allow-cfl-violation"
    )
    assert code == 0


def test_subprocess_determinism(tmp_path):
    def invoke(*args):
        return subprocess.run([sys.executable, "-m", "octomaxwell", *args], capture_output=True, check=False)

    a = invoke("residual", "--scenario", "potential-wave", "--refine", "1", "--json")
    b = invoke("residual", "--scenario", "potential-wave", "--refine", "1", "--json")
    assert a.returncode == 0 and a.stdout == b.stdout
    cfg = str(CONFIGS / "plane_wave.cfg")
    for d in ("x", "y"):
        assert invoke("simulate", "--config", cfg, "--out", str(tmp_path / d), "--steps", "16").returncode == 0
    for p in sorted((tmp_path / "x").iterdir()):
        assert p.read_bytes() == (tmp_path / "y" / p.name).read_bytes()
    assert invoke("mul", "e1").returncode == 2
