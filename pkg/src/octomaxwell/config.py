"""TOML scenario/solver configuration files.

Layout (every section optional unless noted)::

    [scenario]              # required
    name = "plane-wave"
    [scenario.params]       # passed to the scenario factory
    amplitude = 1.0

    [lattice]
    n = [64, 4, 4]          # solver: 3 ints; residual: one int
    h = [0.1, 0.1, 0.1]     # or a single number
    refine = 2              # residual only: extra halvings of h

    [time]                  # solver only
    steps = 256             # required for simulate
    dt = 0.025
    cfl_limit = 0.028
    allow_cfl_violation = false

    [diagnostics]           # solver only
    every = 8
    snapshot_every = 0

    [duality]
    theta = 1.0             # solver twin run angle, or list of angles for reports
    seed = 0

Unknown top-level sections or keys are rejected.
"""

from __future__ import annotations

import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib

from .fdtd import SolverConfig

__all__ = ["ConfigError", "load_config", "solver_config", "residual_request"]

_ALLOWED = {
    "scenario": {"name", "params"},
    "lattice": {"n", "h", "refine"},
    "time": {"steps", "dt", "cfl_limit", "allow_cfl_violation"},
    "diagnostics": {"every", "snapshot_every"},
    "duality": {"theta", "seed"},
}


class ConfigError(ValueError):
    pass


def load_config(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    try:
        data = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return validate(data, str(path))


def validate(data: dict, source: str = "<config>") -> dict:
    for section, body in data.items():
        if section not in _ALLOWED:
            raise ConfigError(f"{source}: unknown section [{section}]")
        if not isinstance(body, dict):
            raise ConfigError(f"{source}: [{section}] must be a table")
        extra = set(body) - _ALLOWED[section]
        if extra:
            raise ConfigError(f"{source}: unknown key(s) in [{section}]: {', '.join(sorted(extra))}")
    if "scenario" not in data or "name" not in data["scenario"]:
        raise ConfigError(f"{source}: [scenario] name is required")
    return data


def _triple(value, name):
    if isinstance(value, (int, float)):
        return (value,) * 3
    if isinstance(value, list) and len(value) == 3:
        return tuple(value)
    raise ConfigError(f"lattice.{name} must be a number or a list of 3 numbers")


def solver_config(data: dict, **overrides) -> SolverConfig:
    lattice = data.get("lattice", {})
    time = data.get("time", {})
    diag = data.get("diagnostics", {})
    duality = data.get("duality", {})
    if "n" not in lattice or "h" not in lattice:
        raise ConfigError("solver config needs lattice.n and lattice.h")
    kwargs = dict(
        n=_triple(lattice["n"], "n"),
        h=_triple(lattice["h"], "h"),
        steps=time.get("steps"),
        dt=time.get("dt"),
        cfl_limit=time.get("cfl_limit"),
        allow_cfl_violation=bool(time.get("allow_cfl_violation", False)),
        scenario=data["scenario"]["name"],
        params=dict(data["scenario"].get("params", {})),
        diagnostics_every=diag.get("every", 1),
        snapshot_every=diag.get("snapshot_every", 0),
        duality_theta=duality.get("theta", 1.0),
        seed=duality.get("seed", 0),
    )
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    if kwargs["steps"] is None:
        raise ConfigError("solver config needs time.steps")
    if isinstance(kwargs["duality_theta"], list):
        raise ConfigError("solver duality.theta must be a single angle")
    try:
        return SolverConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def residual_request(data: dict) -> dict:
    """Scenario name, params, n, h, refine and thetas for residual/duality reports."""
    lattice = data.get("lattice", {})
    theta = data.get("duality", {}).get("theta")
    thetas = None if theta is None else (theta if isinstance(theta, list) else [theta])
    n = lattice.get("n")
    if isinstance(n, list):
        raise ConfigError("residual config takes a single lattice.n")
    h = lattice.get("h")
    if isinstance(h, list):
        raise ConfigError("residual config takes a single lattice.h")
    return {
        "scenario": data["scenario"]["name"],
        "params": dict(data["scenario"].get("params", {})),
        "n": n,
        "h": h,
        "refine": lattice.get("refine", 0),
        "thetas": thetas,
    }
