from pathlib import Path

import pytest

from octomaxwell.config import ConfigError, load_config, residual_request, solver_config, validate

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def write(tmp_path, text):
    p = tmp_path / "c.cfg"
    p.write_text(text)
    return p


def test_bundled_configs_parse():
    for p in sorted(CONFIGS.glob("*.cfg")):
        assert "scenario" in load_config(p)
    cfg = solver_config(load_config(CONFIGS / "plane_wave.cfg"))
    assert cfg.n == (64, 4, 4) and cfg.steps == 256 and cfg.dt == 0.025
    cfg.check_cfl()


def test_missing_file_names_path(tmp_path):
    with pytest.raises(FileNotFoundError, match="nope.cfg"):
        load_config(tmp_path / "nope.cfg")


def test_bad_toml(tmp_path):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "[scenario\nname=1"))


@pytest.mark.parametrize(
    "data",
    [
        {"scenario": {"name": "x"}, "extra": {}},
        {"scenario": {"name": "x", "color": 1}},
        {"lattice": {"n": 4}},
        {"scenario": "x"},
    ],
)
def test_validation_rejects(data):
    with pytest.raises(ConfigError):
        validate(data)


def test_solver_overrides_and_errors(tmp_path):
    data = load_config(CONFIGS / "plane_wave.cfg")
    assert solver_config(data, steps=3).steps == 3
    with pytest.raises(ConfigError):
        solver_config(data, steps=0)
    with pytest.raises(ConfigError):
        solver_config({"scenario": {"name": "plane-wave"}})
    no_steps = {"scenario": {"name": "vacuum"}, "lattice": {"n": 4, "h": 1.0}}
    with pytest.raises(ConfigError):
        solver_config(no_steps)
    assert solver_config(no_steps, steps=2).n == (4, 4, 4)


def test_residual_request():
    data = load_config(CONFIGS / "potential_wave.cfg")
    req = residual_request(data)
    assert req["scenario"] == "potential-wave" and req["n"] == 16 and req["refine"] == 2
    assert req["params"]["coefficients"][1] == [0.0, 0.5]
    req = residual_request({"scenario": {"name": "zero"}, "duality": {"theta": 0.5}})
    assert req["thetas"] == [0.5]
    with pytest.raises(ConfigError):
        residual_request({"scenario": {"name": "zero"}, "lattice": {"n": [4, 4, 4]}})
