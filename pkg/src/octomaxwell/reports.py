"""Residual and duality reports: convergence ladders, CSV and JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources

import numpy as np

from .maxwell import (
    duality_rotate,
    interior_max,
    interior_rms,
    residuals,
    rotate_pair,
    rotate_residuals,
)
from .scenarios import ScenarioCase, build_scenario

__all__ = [
    "REPORT_COLUMNS",
    "NONZERO_FLOOR",
    "convergence_order",
    "case_channels",
    "residual_report",
    "duality_report",
    "report_csv",
    "dumps",
    "load_schema",
]

REPORT_COLUMNS = ("scenario", "h", "residual_name", "interior_max", "interior_l2", "convergence_order")
# channels below this max-norm count as exactly zero (no order reported)
NONZERO_FLOOR = 1e-10
MIRRORS = {"electric-gauss": "monopole-gauss", "monopole-gauss": "electric-gauss"}


def convergence_order(err_coarse: float, err_fine: float, h_coarse: float, h_fine: float) -> float | None:
    if err_coarse <= NONZERO_FLOOR or err_fine <= NONZERO_FLOOR:
        return None
    return math.log(err_coarse / err_fine) / math.log(h_coarse / h_fine)


def _vector_norm(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(v**2, axis=0))


def case_channels(case: ScenarioCase) -> dict[str, tuple[float, float]]:
    """(interior max, interior rms) per residual channel of one case."""
    r = case.residuals()
    idx = case.index
    out = {
        "r_gauss_e": r.r_gauss_e,
        "r_gauss_m": r.r_gauss_m,
        "r_faraday": _vector_norm(r.r_faraday),
        "r_ampere": _vector_norm(r.r_ampere),
        "r_total": r.magnitude(),
    }
    norms = {k: (interior_max(v, idx), interior_rms(v, idx)) for k, v in out.items()}
    cont = case.continuity()
    if cont is not None:
        ci = case.continuity_index
        norms["continuity_e"] = (interior_max(cont[0], ci), interior_rms(cont[0], ci))
        norms["continuity_m"] = (interior_max(cont[1], ci), interior_rms(cont[1], ci))
        box = np.abs(case.wave_operator())
        norms["dalembertian_y0"] = (interior_max(box, idx), interior_rms(box, idx))
    return norms


def two_path_gap(case: ScenarioCase) -> float | None:
    """Largest difference between octonion-component and direct residuals."""
    comp = case.component_residuals()
    if comp is None:
        return None
    direct = case.residuals()
    return float(np.max(np.abs(comp.stacked() - direct.stacked())[(slice(None),) + case.index], initial=0.0))


def residual_report(name: str, n: int, h: float | None = None, refine: int = 0, **params) -> dict:
    """Evaluate a scenario at n, 2n, ..., 2^refine n (h halved each time)."""
    levels = []
    for level in range(refine + 1):
        scale = 2**level
        case = build_scenario(name, n * scale, None if h is None else h / scale, **params)
        levels.append((case, case_channels(case), two_path_gap(case)))
    rows = []
    for i, (case, norms, _) in enumerate(levels):
        for channel, (mx, l2) in norms.items():
            order = None
            if i > 0:
                prev_case, prev_norms, _ = levels[i - 1]
                order = convergence_order(prev_norms[channel][0], mx, prev_case.h, case.h)
            rows.append(
                {
                    "scenario": name,
                    "h": case.h,
                    "residual_name": channel,
                    "interior_max": mx,
                    "interior_l2": l2,
                    "convergence_order": order,
                }
            )
    gaps = [g for _, _, g in levels if g is not None]
    return {
        "schema": "octomaxwell/residual-report",
        "version": 1,
        "scenario": name,
        "params": _jsonable(params),
        "n": [n * 2**i for i in range(refine + 1)],
        "rows": rows,
        "two_path_gap": max(gaps) if gaps else None,
    }


def _rotated_derivatives(case: ScenarioCase, theta: float):
    return rotate_pair(case.dE_dt, case.dH_dt, theta)


def duality_report(name: str, n: int, thetas, h: float | None = None, tol: float = 1e-12, **params) -> dict:
    """Residual-norm invariance, pair rotation and composition checks over angles."""
    case = build_scenario(name, n, h, **params)
    base = case.residuals()
    idx = case.index
    base_norm = interior_max(base.magnitude(), idx)
    scale = max(base_norm, 1e-300)
    entries = []
    all_pass = True
    for theta in thetas:
        rotated = duality_rotate(case.state, theta)
        dE, dH = _rotated_derivatives(case, theta)
        r = residuals(rotated, dE, dH)
        rot_norm = interior_max(r.magnitude(), idx)
        invariance = abs(rot_norm - base_norm) / scale
        predicted = rotate_residuals(base, theta)
        pair_gap = float(np.max(np.abs(r.stacked() - predicted.stacked()))) / scale
        # compose with a second fixed angle
        beta = 0.3
        twice = duality_rotate(rotated, beta)
        once = duality_rotate(case.state, theta + beta)
        composition = max(
            float(np.max(np.abs(getattr(twice, f) - getattr(once, f))))
            for f in ("E", "H", "rho_e", "rho_m", "j_e", "j_m")
        )
        entry = {
            "theta": float(theta),
            "residual_norm": base_norm,
            "rotated_residual_norm": rot_norm,
            "invariance_rel_error": invariance,
            "pair_rotation_rel_error": pair_gap,
            "composition_error": composition,
        }
        passed = invariance <= tol and pair_gap <= tol and composition <= tol
        if abs(math.cos(theta)) < 1e-15 and name in MIRRORS and math.sin(theta) > 0:
            mirror = build_scenario(MIRRORS[name], n, h, **params).state
            if name == "monopole-gauss":
                # R(pi/2) sends a magnetic state to minus the electric mirror
                mirror = duality_rotate(mirror, math.pi)
            gap = max(
                float(np.max(np.abs(getattr(rotated, f) - getattr(mirror, f))))
                for f in ("E", "H", "rho_e", "rho_m")
            )
            entry["mirror_scenario"] = MIRRORS[name]
            entry["mirror_field_gap"] = gap
            passed = passed and gap <= tol
        entry["passed"] = passed
        all_pass = all_pass and passed
        entries.append(entry)
    return {
        "schema": "octomaxwell/duality-report",
        "version": 1,
        "scenario": name,
        "n": n,
        "tolerance": tol,
        "entries": entries,
        "passed": all_pass,
    }


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for row in report["rows"]:
        w.writerow([_fmt(row[c]) for c in REPORT_COLUMNS])
    return buf.getvalue()


def _round17(value):
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(f"{value:.17g}")
    if isinstance(value, dict):
        return {k: _round17(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_round17(v) for v in value]
    return value


def dumps(report: dict) -> str:
    return json.dumps(_round17(_jsonable(report)), indent=2, sort_keys=True) + "\n"


def load_schema(name: str) -> dict:
    """Load one of the bundled JSON schemas, e.g. ``"residual_report"``."""
    text = resources.files("octomaxwell.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)
