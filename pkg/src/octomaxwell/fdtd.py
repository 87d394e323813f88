"""Leapfrog time-domain evolution of the symmetric curl equations.

    dE/dt =  curl H - j_e
    dH/dt = -curl E - j_m

on a periodic box.  Two interleaved Yee grids are advanced together:

* primal grid: E on cell edges, H on cell faces (the usual Yee layout);
* dual grid:   H on cell edges, E on cell faces.

Edge fields live at integer time levels and face fields half a step
earlier, so the edge pair (E_primal, H_dual) and the face pair
(E_dual, H_primal) each sit at one place and one time.  A duality rotation
acts on those pairs, and because both grids use the same edge->face and
face->edge curls, one step commutes with the rotation exactly.  Discrete
div(curl) vanishes identically, so Gauss residuals only change through
div(j).

This scheme is engineering scaffolding for the demonstrations; nothing
here is prescribed by the continuum equations beyond the update form.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .maxwell import rotate_pair

logger = logging.getLogger(__name__)

__all__ = [
    "CFLError",
    "SolverConfig",
    "SolverScenario",
    "YeeState",
    "DiagnosticsRow",
    "DIAGNOSTICS_HEADER",
    "SOLVER_SCENARIOS",
    "initial_state",
    "step",
    "run",
    "analytic_error",
    "diagnostics_csv",
    "write_snapshot",
]

DIAGNOSTICS_HEADER = ("step", "time", "energy", "source_work", "div_e", "div_h", "duality_drift")
COMPONENT_ORDER = ("E1", "E2", "E3", "H1", "H2", "H3")

# Offsets (in cells) of each vector component on edges and faces, and of
# the scalar positions used for divergences.
EDGE_OFFSETS = ((0.5, 0.0, 0.0), (0.0, 0.5, 0.0), (0.0, 0.0, 0.5))
FACE_OFFSETS = ((0.0, 0.5, 0.5), (0.5, 0.0, 0.5), (0.5, 0.5, 0.0))
NODE_OFFSET = (0.0, 0.0, 0.0)
CELL_OFFSET = (0.5, 0.5, 0.5)


class CFLError(ValueError):
    """Time step exceeds the configured stability limit."""


def default_cfl_limit(h) -> float:
    return 0.5 * min(h) / math.sqrt(3.0)


# ---------------------------------------------------------------------------
# scenarios


VectorFn = Callable[[np.ndarray, np.ndarray, np.ndarray, float], tuple]
ScalarFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _zero_vec(x, y, z, t):
    return (0.0, 0.0, 0.0)


def _zero_scalar(x, y, z):
    return 0.0


@dataclass
class SolverScenario:
    """Analytic initial data and sources, as functions of coordinates (and time)."""

    name: str
    E: VectorFn = _zero_vec
    H: VectorFn = _zero_vec
    j_e: VectorFn = _zero_vec
    j_m: VectorFn = _zero_vec
    rho_e: ScalarFn = _zero_scalar
    rho_m: ScalarFn = _zero_scalar
    has_sources: bool = False


def _vacuum(lengths, **_):
    return SolverScenario("vacuum")


def _plane_wave(lengths, amplitude=1.0, mode=1, **_):
    """E = y^ A cos(k(x - t)), H = z^ A cos(k(x - t)), k = 2 pi mode / Lx."""
    k = 2.0 * math.pi * mode / lengths[0]

    def wave(x, y, z, t):
        c = amplitude * np.cos(k * (x - t))
        return (0.0, c, 0.0), (0.0, 0.0, c)

    return SolverScenario(
        "plane-wave",
        E=lambda x, y, z, t: wave(x, y, z, t)[0],
        H=lambda x, y, z, t: wave(x, y, z, t)[1],
    )


def _pulse_profile(lengths, width, t0, tau):
    cx, cy = 0.5 * lengths[0], 0.5 * lengths[1]

    def profile(x, y, t):
        r2 = (x - cx) ** 2 + (y - cy) ** 2
        return np.exp(-r2 / (2.0 * width**2)) * math.exp(-(((t - t0) / tau) ** 2))

    return profile


def _current_pulse(lengths, electric=1.0, magnetic=0.0, width=None, t0=None, tau=None, **_):
    """Line current along x3 with a Gaussian transverse profile and time envelope.

    The current depends only on (x1, x2), so its divergence is zero exactly.
    ``electric`` and ``magnetic`` scale the j_e and j_m parts.
    """
    width = 0.1 * min(lengths[:2]) if width is None else width
    tau = 0.1 * lengths[0] if tau is None else tau
    t0 = 2.0 * tau if t0 is None else t0
    profile = _pulse_profile(lengths, width, t0, tau)
    return SolverScenario(
        "current-pulse",
        j_e=lambda x, y, z, t: (0.0, 0.0, electric * profile(x, y, t)),
        j_m=lambda x, y, z, t: (0.0, 0.0, magnetic * profile(x, y, t)),
        has_sources=True,
    )


def _static_charge(lengths, electric=1.0, magnetic=0.0, width=None, **_):
    """Gaussian static charge blobs with zero initial fields and no currents."""
    width = 0.1 * min(lengths) if width is None else width
    c = [0.5 * v for v in lengths]

    def blob(x, y, z):
        return np.exp(-((x - c[0]) ** 2 + (y - c[1]) ** 2 + (z - c[2]) ** 2) / (2.0 * width**2))

    return SolverScenario(
        "static-charge",
        rho_e=lambda x, y, z: electric * blob(x, y, z),
        rho_m=lambda x, y, z: magnetic * blob(x, y, z),
        has_sources=True,
    )


SOLVER_SCENARIOS: dict[str, Callable[..., SolverScenario]] = {
    "vacuum": _vacuum,
    "plane-wave": _plane_wave,
    "current-pulse": _current_pulse,
    "static-charge": _static_charge,
}


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class SolverConfig:
    n: tuple[int, int, int]
    h: tuple[float, float, float]
    steps: int
    dt: float | None = None
    cfl_limit: float | None = None
    allow_cfl_violation: bool = False
    scenario: str = "plane-wave"
    params: dict = field(default_factory=dict)
    diagnostics_every: int = 1
    snapshot_every: int = 0
    duality_theta: float | None = 1.0
    seed: int = 0

    def __post_init__(self):
        n = tuple(int(v) for v in self.n)
        h = tuple(float(v) for v in self.h)
        if len(n) != 3 or len(h) != 3:
            raise ValueError("solver lattice needs 3 entries for n and h")
        if any(v < 1 for v in n) or any(not v > 0 for v in h):
            raise ValueError(f"invalid solver lattice n={n}, h={h}")
        if int(self.steps) < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if int(self.diagnostics_every) < 1:
            raise ValueError("diagnostics_every must be >= 1")
        if int(self.snapshot_every) < 0:
            raise ValueError("snapshot_every must be >= 0")
        if self.scenario not in SOLVER_SCENARIOS:
            raise ValueError(
                f"unknown solver scenario {self.scenario!r}; known: {', '.join(sorted(SOLVER_SCENARIOS))}"
            )
        limit = default_cfl_limit(h) if self.cfl_limit is None else float(self.cfl_limit)
        dt = limit if self.dt is None else float(self.dt)
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "cfl_limit", limit)
        object.__setattr__(self, "dt", dt)

    @property
    def lengths(self) -> tuple[float, float, float]:
        return tuple(n * h for n, h in zip(self.n, self.h))

    def check_cfl(self) -> None:
        if self.dt > self.cfl_limit * (1.0 + 1e-12):
            msg = f"dt={self.dt:.17g} exceeds the CFL limit {self.cfl_limit:.17g}"
            if not self.allow_cfl_violation:
                raise CFLError(msg)
            logger.warning("%s (override in effect)", msg)

    def build_scenario(self) -> SolverScenario:
        return SOLVER_SCENARIOS[self.scenario](self.lengths, **self.params)


# ---------------------------------------------------------------------------
# grid operators


@dataclass(frozen=True)
class Grid:
    n: tuple[int, int, int]
    h: tuple[float, float, float]

    @property
    def cell_volume(self) -> float:
        return self.h[0] * self.h[1] * self.h[2]

    def points(self, offset) -> tuple[np.ndarray, ...]:
        return tuple(
            np.meshgrid(
                *((np.arange(self.n[a]) + offset[a]) * self.h[a] for a in range(3)),
                indexing="ij",
                sparse=True,
            )
        )

    def sample_vector(self, fn: VectorFn, offsets, t: float) -> np.ndarray:
        out = np.empty((3,) + self.n)
        for c in range(3):
            x, y, z = self.points(offsets[c])
            out[c] = np.broadcast_to(fn(x, y, z, t)[c], self.n)
        return out

    def sample_scalar(self, fn: ScalarFn, offset) -> np.ndarray:
        x, y, z = self.points(offset)
        return np.broadcast_to(np.asarray(fn(x, y, z), dtype=float), self.n).copy()

    def dplus(self, f: np.ndarray, axis: int) -> np.ndarray:
        return (np.roll(f, -1, axis=axis) - f) / self.h[axis]

    def dminus(self, f: np.ndarray, axis: int) -> np.ndarray:
        return (f - np.roll(f, 1, axis=axis)) / self.h[axis]

    def curl_edges_to_faces(self, F: np.ndarray) -> np.ndarray:
        d = self.dplus
        return np.stack([d(F[2], 1) - d(F[1], 2), d(F[0], 2) - d(F[2], 0), d(F[1], 0) - d(F[0], 1)])

    def curl_faces_to_edges(self, G: np.ndarray) -> np.ndarray:
        d = self.dminus
        return np.stack([d(G[2], 1) - d(G[1], 2), d(G[0], 2) - d(G[2], 0), d(G[1], 0) - d(G[0], 1)])

    def div_edges(self, F: np.ndarray) -> np.ndarray:
        """Divergence of an edge field, located at nodes."""
        return self.dminus(F[0], 0) + self.dminus(F[1], 1) + self.dminus(F[2], 2)

    def div_faces(self, G: np.ndarray) -> np.ndarray:
        """Divergence of a face field, located at cell centres."""
        return self.dplus(G[0], 0) + self.dplus(G[1], 1) + self.dplus(G[2], 2)


@dataclass(frozen=True)
class YeeState:
    """Both staggered grids at one step.

    ``edge_E``/``edge_H`` are at time ``t``; ``face_E``/``face_H`` at ``t - dt/2``.
    Primal grid = (edge_E, face_H); dual grid = (edge_H, face_E).
    """

    t: float
    edge_E: np.ndarray
    edge_H: np.ndarray
    face_E: np.ndarray
    face_H: np.ndarray

    def rotated(self, theta: float) -> YeeState:
        eE, eH = rotate_pair(self.edge_E, self.edge_H, theta)
        fE, fH = rotate_pair(self.face_E, self.face_H, theta)
        return replace(self, edge_E=eE, edge_H=eH, face_E=fE, face_H=fH)

    def max_difference(self, other: YeeState) -> float:
        return max(
            float(np.max(np.abs(a - b)))
            for a, b in (
                (self.edge_E, other.edge_E),
                (self.edge_H, other.edge_H),
                (self.face_E, other.face_E),
                (self.face_H, other.face_H),
            )
        )


class Sources:
    """Samples a scenario's currents at staggered locations, optionally rotated."""

    def __init__(self, grid: Grid, scenario: SolverScenario, theta: float = 0.0):
        self.grid = grid
        self.scenario = scenario
        self.theta = theta
        self.active = scenario.has_sources
        self.rho_e_nodes = grid.sample_scalar(scenario.rho_e, NODE_OFFSET)
        self.rho_e_cells = grid.sample_scalar(scenario.rho_e, CELL_OFFSET)
        self.rho_m_nodes = grid.sample_scalar(scenario.rho_m, NODE_OFFSET)
        self.rho_m_cells = grid.sample_scalar(scenario.rho_m, CELL_OFFSET)
        if theta:
            self.rho_e_nodes, self.rho_m_nodes = rotate_pair(self.rho_e_nodes, self.rho_m_nodes, theta)
            self.rho_e_cells, self.rho_m_cells = rotate_pair(self.rho_e_cells, self.rho_m_cells, theta)

    def currents(self, offsets, t: float) -> tuple[np.ndarray, np.ndarray]:
        """(j_e, j_m) sampled at ``offsets`` and time ``t``."""
        je = self.grid.sample_vector(self.scenario.j_e, offsets, t)
        jm = self.grid.sample_vector(self.scenario.j_m, offsets, t)
        if self.theta:
            je, jm = rotate_pair(je, jm, self.theta)
        return je, jm

    def rotated(self, theta: float) -> Sources:
        return Sources(self.grid, self.scenario, self.theta + theta)


def initial_state(grid: Grid, scenario: SolverScenario, dt: float) -> YeeState:
    return YeeState(
        t=0.0,
        edge_E=grid.sample_vector(scenario.E, EDGE_OFFSETS, 0.0),
        edge_H=grid.sample_vector(scenario.H, EDGE_OFFSETS, 0.0),
        face_E=grid.sample_vector(scenario.E, FACE_OFFSETS, -0.5 * dt),
        face_H=grid.sample_vector(scenario.H, FACE_OFFSETS, -0.5 * dt),
    )


def advance_faces(grid: Grid, state: YeeState, dt: float, sources: Sources | None):
    """Face fields from ``t - dt/2`` to ``t + dt/2`` using edge fields at ``t``."""
    face_E = state.face_E + dt * grid.curl_edges_to_faces(state.edge_H)
    face_H = state.face_H - dt * grid.curl_edges_to_faces(state.edge_E)
    if sources is not None and sources.active:
        je, jm = sources.currents(FACE_OFFSETS, state.t)
        face_E = face_E - dt * je
        face_H = face_H - dt * jm
    return face_E, face_H


def advance_edges(grid: Grid, state: YeeState, faces, dt: float, sources: Sources | None) -> YeeState:
    """Edge fields from ``t`` to ``t + dt`` using face fields at ``t + dt/2``."""
    face_E, face_H = faces
    edge_E = state.edge_E + dt * grid.curl_faces_to_edges(face_H)
    edge_H = state.edge_H - dt * grid.curl_faces_to_edges(face_E)
    if sources is not None and sources.active:
        je, jm = sources.currents(EDGE_OFFSETS, state.t + 0.5 * dt)
        edge_E = edge_E - dt * je
        edge_H = edge_H - dt * jm
    return YeeState(state.t + dt, edge_E, edge_H, face_E, face_H)


def step(grid: Grid, state: YeeState, dt: float, sources: Sources | None = None) -> YeeState:
    """One leapfrog step: faces by a full step, then edges by a full step."""
    return advance_edges(grid, state, advance_faces(grid, state, dt, sources), dt, sources)


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class DiagnosticsRow:
    step: int
    time: float
    energy: float
    source_work: float
    div_e: float
    div_h: float
    duality_drift: float

    def as_tuple(self) -> tuple:
        return (self.step, self.time, self.energy, self.source_work, self.div_e, self.div_h, self.duality_drift)


def energy(grid: Grid, state: YeeState, faces_next) -> float:
    """Leapfrog energy: edge fields squared plus face fields paired across the step.

    Averaged over the two grids; conserved to rounding in vacuum.
    """
    face_E_next, face_H_next = faces_next
    primal = np.sum(state.edge_E**2) + np.sum(state.face_H * face_H_next)
    dual = np.sum(state.edge_H**2) + np.sum(state.face_E * face_E_next)
    return float(0.25 * grid.cell_volume * (primal + dual))


def source_work(grid: Grid, state: YeeState, faces_next, sources: Sources) -> float:
    """Integral of j_e.E + j_m.H at time ``t``, averaged over the two grids."""
    if not sources.active:
        return 0.0
    je_edge, jm_edge = sources.currents(EDGE_OFFSETS, state.t)
    je_face, jm_face = sources.currents(FACE_OFFSETS, state.t)
    face_E = 0.5 * (state.face_E + faces_next[0])
    face_H = 0.5 * (state.face_H + faces_next[1])
    total = (
        np.sum(je_edge * state.edge_E)
        + np.sum(jm_face * face_H)
        + np.sum(jm_edge * state.edge_H)
        + np.sum(je_face * face_E)
    )
    return float(0.5 * grid.cell_volume * total)


def gauss_residuals(grid: Grid, state: YeeState, sources: Sources) -> dict[str, np.ndarray]:
    """div - rho for E and H on both grids."""
    return {
        "e_nodes": grid.div_edges(state.edge_E) - sources.rho_e_nodes,
        "e_cells": grid.div_faces(state.face_E) - sources.rho_e_cells,
        "h_nodes": grid.div_edges(state.edge_H) - sources.rho_m_nodes,
        "h_cells": grid.div_faces(state.face_H) - sources.rho_m_cells,
    }


@dataclass
class RunResult:
    config: SolverConfig
    rows: list[DiagnosticsRow]
    final: YeeState
    gauss_initial: dict[str, np.ndarray]
    gauss_final: dict[str, np.ndarray]
    max_gauss_drift: float
    snapshots: list[int] = field(default_factory=list)

    def csv_text(self) -> str:
        return diagnostics_csv(self.rows)


def run(config: SolverConfig, out_dir: Path | None = None, on_row=None) -> RunResult:
    """Evolve ``config.steps`` steps, emitting diagnostics every ``diagnostics_every``.

    With ``duality_theta`` set, a twin run starts from the rotated state with
    rotated sources and ``duality_drift`` is ``max |R(theta) state - twin|``.
    """
    config.check_cfl()
    grid = Grid(config.n, config.h)
    scenario = config.build_scenario()
    dt = config.dt
    sources = Sources(grid, scenario)
    state = initial_state(grid, scenario, dt)
    twin = twin_sources = None
    if config.duality_theta is not None:
        twin = state.rotated(config.duality_theta)
        twin_sources = sources.rotated(config.duality_theta)

    g0 = gauss_residuals(grid, state, sources)
    max_drift = 0.0
    rows: list[DiagnosticsRow] = []
    snapshots: list[int] = []
    for m in range(config.steps + 1):
        faces = advance_faces(grid, state, dt, sources)
        twin_faces = None if twin is None else advance_faces(grid, twin, dt, twin_sources)
        g = gauss_residuals(grid, state, sources)
        max_drift = max(max_drift, max(float(np.max(np.abs(g[k] - g0[k]))) for k in g))
        if m % config.diagnostics_every == 0 or m == config.steps:
            drift = 0.0 if twin is None else state.rotated(config.duality_theta).max_difference(twin)
            row = DiagnosticsRow(
                step=m,
                time=m * dt,
                energy=energy(grid, state, faces),
                source_work=source_work(grid, state, faces, sources),
                div_e=float(max(np.max(np.abs(g["e_nodes"])), np.max(np.abs(g["e_cells"])))),
                div_h=float(max(np.max(np.abs(g["h_nodes"])), np.max(np.abs(g["h_cells"])))),
                duality_drift=drift,
            )
            rows.append(row)
            if on_row is not None:
                on_row(row)
        if out_dir is not None and config.snapshot_every and m % config.snapshot_every == 0:
            write_snapshot(out_dir, m, grid, state, dt)
            snapshots.append(m)
        if m == config.steps:
            break
        state = advance_edges(grid, state, faces, dt, sources)
        if twin is not None:
            twin = advance_edges(grid, twin, twin_faces, dt, twin_sources)
    return RunResult(config, rows, state, g0, gauss_residuals(grid, state, sources), max_drift, snapshots)


def analytic_error(config: SolverConfig, state: YeeState, norm: str = "max") -> float:
    """Deviation of all four staggered fields from the scenario's closed form.

    ``norm`` is ``"max"`` or ``"rms"``.  Only meaningful for source-free
    scenarios whose E and H are exact solutions (``plane-wave``, ``vacuum``).
    """
    grid = Grid(config.n, config.h)
    sc = config.build_scenario()
    t_face = state.t - 0.5 * config.dt
    pairs = (
        (state.edge_E, grid.sample_vector(sc.E, EDGE_OFFSETS, state.t)),
        (state.edge_H, grid.sample_vector(sc.H, EDGE_OFFSETS, state.t)),
        (state.face_E, grid.sample_vector(sc.E, FACE_OFFSETS, t_face)),
        (state.face_H, grid.sample_vector(sc.H, FACE_OFFSETS, t_face)),
    )
    if norm == "max":
        return max(float(np.max(np.abs(a - b))) for a, b in pairs)
    if norm == "rms":
        return math.sqrt(sum(float(np.mean((a - b) ** 2)) for a, b in pairs) / len(pairs))
    raise ValueError(f"norm must be 'max' or 'rms', got {norm!r}")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def diagnostics_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DIAGNOSTICS_HEADER)
    for r in rows:
        w.writerow([_fmt(v) for v in r.as_tuple()])
    return buf.getvalue()


def write_snapshot(out_dir: Path, step_index: int, grid: Grid, state: YeeState, dt: float) -> Path:
    """Primal-grid fields as little-endian float64 files plus a JSON sidecar."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"snapshot_{step_index:06d}"
    arrays = list(state.edge_E) + list(state.face_H)
    files = []
    for name, arr in zip(COMPONENT_ORDER, arrays):
        path = out_dir / f"{stem}_{name}.bin"
        np.ascontiguousarray(arr, dtype="<f8").tofile(path)
        files.append(path.name)
    sidecar = {
        "format_version": 1,
        "step": step_index,
        "dims": list(grid.n),
        "spacing": list(grid.h),
        "dtype": "<f8",
        "order": "C",
        "components": list(COMPONENT_ORDER),
        "files": files,
        "time_E": state.t,
        "time_H": state.t - 0.5 * dt,
        "offsets": {
            "E": [list(o) for o in EDGE_OFFSETS],
            "H": [list(o) for o in FACE_OFFSETS],
        },
    }
    path = out_dir / f"{stem}.json"
    path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return path
