"""Physical reading of the derivative: symmetric Maxwell residuals and duality.

With ``Y = E + e7 H`` for the vector components and the sources defined
from Y0 by

    d_0 Y0 = -rho_m + e7 rho_e,      d_j Y0 = (j_m)_j - e7 (j_e)_j,

the eight real coefficients of ``dO`` (Wick form) are, up to sign, the
residuals of

    div E = rho_e,   div H = rho_m,
    curl E = -dH/dt - j_m,   curl H = dE/dt + j_e.

``eight_component_split`` plus ``residuals_from_components`` is one route
to those residuals; ``extract_state`` plus ``residuals`` is the other.
Units have c = 1 and no permittivity/permeability factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Sequence

import numpy as np

from .calculus import (
    PERIODIC,
    FieldGrid4D,
    Lattice4D,
    LatticeError,
    OctonionField,
    _as_boundaries,
    diff1,
    partial,
    second_partial,
)

__all__ = [
    "SpatialLattice",
    "MaxwellState",
    "MaxwellResiduals",
    "EightComponents",
    "DualityAngle",
    "spatial_partial",
    "div",
    "curl",
    "extract_state",
    "time_derivatives",
    "residuals",
    "eight_component_split",
    "residuals_from_components",
    "rotate_pair",
    "duality_rotate",
    "rotate_residuals",
    "continuity_residuals",
    "dalembertian",
    "interior_max",
    "interior_rms",
]


@dataclass(frozen=True)
class SpatialLattice:
    n: tuple[int, int, int]
    h: tuple[float, float, float]
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)
    boundary: str | tuple[str, str, str] = PERIODIC

    def __post_init__(self):
        n = tuple(int(v) for v in self.n)
        h = tuple(float(v) for v in self.h)
        origin = tuple(float(v) for v in self.origin)
        if len(n) != 3 or len(h) != 3 or len(origin) != 3:
            raise LatticeError("SpatialLattice needs 3 entries for n, h and origin")
        if any(v < 1 for v in n) or any(not v > 0 for v in h):
            raise LatticeError(f"invalid spatial lattice n={n}, h={h}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "boundary", _as_boundaries(self.boundary, 3))

    @classmethod
    def from_4d(cls, lattice: Lattice4D) -> SpatialLattice:
        return cls(lattice.n[1:], lattice.h[1:], lattice.origin[1:], lattice.boundary[1:])

    def coords(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.h[axis] * np.arange(self.n[axis])

    def mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*(self.coords(a) for a in range(3)), indexing="ij", sparse=True))

    def interior(self, width: int = 1) -> tuple[slice, ...]:
        return tuple(
            slice(None) if b == PERIODIC else slice(width, n - width)
            for b, n in zip(self.boundary, self.n)
        )


def spatial_partial(values: np.ndarray, lattice: SpatialLattice, axis: int) -> np.ndarray:
    """d/dx_{axis+1} over the last three array axes."""
    values = np.asarray(values)
    if values.shape[-3:] != lattice.n:
        raise LatticeError(f"values shape {values.shape} does not end in {lattice.n}")
    return diff1(values, values.ndim - 3 + axis, lattice.h[axis], lattice.boundary[axis])


def div(V: np.ndarray, lattice: SpatialLattice) -> np.ndarray:
    return sum(spatial_partial(V[k], lattice, k) for k in range(3))


def curl(V: np.ndarray, lattice: SpatialLattice) -> np.ndarray:
    d = lambda comp, axis: spatial_partial(V[comp], lattice, axis)  # noqa: E731
    return np.stack([d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)])


def _real_array(x, shape, name):
    arr = np.array(x, dtype=float)
    if arr.shape != shape:
        raise LatticeError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MaxwellState:
    """Fields and sources on a spatial lattice.

    Scalars have shape ``batch + lattice.n`` and vectors ``(3,) + batch + lattice.n``;
    a leading batch axis holds time slices when the state comes from a 4D
    field.  ``dt`` is the spacing of that axis (or None).
    """

    lattice: SpatialLattice
    E: np.ndarray = field(repr=False)
    H: np.ndarray = field(repr=False)
    rho_e: np.ndarray = field(repr=False)
    rho_m: np.ndarray = field(repr=False)
    j_e: np.ndarray = field(repr=False)
    j_m: np.ndarray = field(repr=False)
    dt: float | None = None

    def __post_init__(self):
        scalar_shape = np.shape(self.rho_e)
        if scalar_shape[-3:] != self.lattice.n:
            raise LatticeError(f"rho_e shape {scalar_shape} does not end in {self.lattice.n}")
        vector_shape = (3,) + scalar_shape
        for name in ("rho_e", "rho_m"):
            object.__setattr__(self, name, _real_array(getattr(self, name), scalar_shape, name))
        for name in ("E", "H", "j_e", "j_m"):
            object.__setattr__(self, name, _real_array(getattr(self, name), vector_shape, name))

    @classmethod
    def zeros(cls, lattice: SpatialLattice, batch: tuple[int, ...] = (), dt: float | None = None):
        s = batch + lattice.n
        z, v = np.zeros(s), np.zeros((3,) + s)
        return cls(lattice, v, v, z, z, v, v, dt)

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.rho_e.shape[:-3]

    def slice(self, index) -> MaxwellState:
        """Select along the leading batch (time) axis."""
        if not self.batch_shape:
            raise IndexError("state has no batch axis")
        return replace(
            self,
            E=self.E[:, index],
            H=self.H[:, index],
            rho_e=self.rho_e[index],
            rho_m=self.rho_m[index],
            j_e=self.j_e[:, index],
            j_m=self.j_m[:, index],
        )


@dataclass(frozen=True)
class MaxwellResiduals:
    """LHS - RHS of the four equations; zero iff the state solves them."""

    r_gauss_e: np.ndarray
    r_gauss_m: np.ndarray
    r_faraday: np.ndarray
    r_ampere: np.ndarray

    def channels(self) -> dict[str, np.ndarray]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def stacked(self) -> np.ndarray:
        """All eight scalar channels along a leading axis."""
        return np.concatenate(
            [self.r_gauss_e[None], self.r_gauss_m[None], self.r_faraday, self.r_ampere]
        )

    def magnitude(self) -> np.ndarray:
        """Per-site Euclidean length of the eight-component residual."""
        return np.sqrt(np.sum(self.stacked() ** 2, axis=0))

    def take(self, index: tuple) -> MaxwellResiduals:
        """Restrict every channel to ``index`` over the non-vector axes."""
        return MaxwellResiduals(
            self.r_gauss_e[index],
            self.r_gauss_m[index],
            self.r_faraday[(slice(None),) + index],
            self.r_ampere[(slice(None),) + index],
        )


@dataclass(frozen=True)
class EightComponents:
    """Coefficients of e0, e7, e1..e3 and e7e1..e7e3 (= e4..e6) of a field."""

    e0: np.ndarray
    e7: np.ndarray
    e: np.ndarray
    e7e: np.ndarray


class DualityAngle(float):
    """Rotation angle reduced to [0, 2 pi)."""

    def __new__(cls, theta: float):
        theta = float(theta)
        if not math.isfinite(theta):
            raise ValueError("duality angle must be finite")
        reduced = theta % (2.0 * math.pi)
        # fmod can land exactly on 2 pi for tiny negative inputs
        if reduced >= 2.0 * math.pi:
            reduced = 0.0
        return super().__new__(cls, reduced)

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self), math.sin(self)
        return np.array([[c, -s], [s, c]])


def rotate_pair(a: np.ndarray, b: np.ndarray, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Apply R(theta) = [[cos, -sin], [sin, cos]] to the pair (a, b)."""
    theta = DualityAngle(theta)
    c, s = math.cos(theta), math.sin(theta)
    return c * a - s * b, s * a + c * b


def duality_rotate(s: MaxwellState, theta: float) -> MaxwellState:
    """Rotate (rho_e, rho_m), (j_e, j_m) and (E, H) together by R(theta)."""
    rho_e, rho_m = rotate_pair(s.rho_e, s.rho_m, theta)
    j_e, j_m = rotate_pair(s.j_e, s.j_m, theta)
    E, H = rotate_pair(s.E, s.H, theta)
    return replace(s, E=E, H=H, rho_e=rho_e, rho_m=rho_m, j_e=j_e, j_m=j_m)


def rotate_residuals(r: MaxwellResiduals, theta: float) -> MaxwellResiduals:
    """How residuals transform when the state is rotated by R(theta).

    Both (gauss_e, gauss_m) and (faraday, ampere) rotate as pairs by R(theta);
    ``tests/test_maxwell.py`` checks this against brute-force rotation.
    """
    ge, gm = rotate_pair(r.r_gauss_e, r.r_gauss_m, theta)
    fa, am = rotate_pair(r.r_faraday, r.r_ampere, theta)
    return MaxwellResiduals(ge, gm, fa, am)


def time_derivatives(f: FieldGrid4D) -> tuple[np.ndarray, np.ndarray]:
    """(dE/dx0, dH/dx0) from the vector components of ``f``."""
    dY = partial(f.Y[1:], f.lattice, 0)
    return np.ascontiguousarray(dY.real), np.ascontiguousarray(dY.imag)


def extract_state(f: FieldGrid4D, dO: OctonionField | None = None) -> MaxwellState:
    """Read E, H and the Y0-derived sources off a field (axis 0 is x0).

    The result carries one batch entry per x0 slice.  ``dO`` is optional and
    only checked for lattice agreement.
    """
    lat = f.lattice
    if dO is not None and dO.lattice != lat:
        raise LatticeError("derivative field and source field live on different lattices")
    d0 = partial(f.Y[0], lat, 0)
    dj = np.stack([partial(f.Y[0], lat, k) for k in (1, 2, 3)])
    Yv = f.Y[1:]
    return MaxwellState(
        lattice=SpatialLattice.from_4d(lat),
        E=Yv.real,
        H=Yv.imag,
        rho_e=d0.imag,
        rho_m=-d0.real,
        j_e=-dj.imag,
        j_m=dj.real,
        dt=lat.h[0],
    )


def residuals(s: MaxwellState, dE_dt: np.ndarray, dH_dt: np.ndarray) -> MaxwellResiduals:
    """Residuals of the symmetric equations in LHS - RHS form."""
    dE_dt = np.asarray(dE_dt, dtype=float)
    dH_dt = np.asarray(dH_dt, dtype=float)
    if dE_dt.shape != s.E.shape or dH_dt.shape != s.H.shape:
        raise LatticeError("time derivatives do not match the state's field shape")
    lat = s.lattice
    return MaxwellResiduals(
        r_gauss_e=div(s.E, lat) - s.rho_e,
        r_gauss_m=div(s.H, lat) - s.rho_m,
        r_faraday=curl(s.E, lat) + dH_dt + s.j_m,
        r_ampere=curl(s.H, lat) - dE_dt - s.j_e,
    )


def eight_component_split(dO: OctonionField) -> EightComponents:
    c = dO.coefficients
    return EightComponents(e0=c[0], e7=c[7], e=c[1:4], e7e=c[4:7])


def residuals_from_components(c: EightComponents) -> MaxwellResiduals:
    """Map the octonion coefficients onto the residual channels.

    e0 = rho_e - div E, e7 = rho_m - div H,
    e_j = (j_m + dH/dt + curl E)_j, e7e_j = (-j_e - dE/dt + curl H)_j.
    """
    return MaxwellResiduals(r_gauss_e=-c.e0, r_gauss_m=-c.e7, r_faraday=c.e, r_ampere=c.e7e)


def _stack_states(states) -> MaxwellState:
    if isinstance(states, MaxwellState):
        return states
    states = list(states)
    if not states:
        raise ValueError("no states given")
    first = states[0]
    if any(st.lattice != first.lattice for st in states):
        raise LatticeError("states live on different lattices")
    return MaxwellState(
        lattice=first.lattice,
        E=np.stack([st.E for st in states], axis=1),
        H=np.stack([st.H for st in states], axis=1),
        rho_e=np.stack([st.rho_e for st in states]),
        rho_m=np.stack([st.rho_m for st in states]),
        j_e=np.stack([st.j_e for st in states], axis=1),
        j_m=np.stack([st.j_m for st in states], axis=1),
        dt=first.dt,
    )


def continuity_residuals(
    states: MaxwellState | Sequence[MaxwellState], dt: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """``d0 rho + div j`` for both charge species on interior time slices.

    ``states`` is a time series: either a sequence of single-slice states or
    one state whose leading batch axis is time.  Returns arrays with
    ``nt - 2`` slices (central differences in time).
    """
    s = _stack_states(states)
    if len(s.batch_shape) != 1:
        raise ValueError("continuity needs a one-dimensional time series of states")
    nt = s.batch_shape[0]
    if nt < 3:
        raise ValueError(f"continuity needs at least 3 time slices, got {nt}")
    dt = s.dt if dt is None else dt
    if dt is None or not dt > 0:
        raise ValueError("a positive time spacing is required")
    lat = s.lattice

    def one(rho, j):
        d0 = (rho[2:] - rho[:-2]) / (2.0 * dt)
        return d0 + div(j[:, 1:-1], lat)

    return one(s.rho_e, s.j_e), one(s.rho_m, s.j_m)


def dalembertian(Y0: np.ndarray, lattice: Lattice4D) -> np.ndarray:
    """``d0^2 Y0 - (d1^2 + d2^2 + d3^2) Y0`` with signature (+, -, -, -)."""
    Y0 = np.asarray(Y0)
    return second_partial(Y0, lattice, 0) - sum(second_partial(Y0, lattice, k) for k in (1, 2, 3))


def interior_max(values: np.ndarray, index: tuple = ()) -> float:
    v = np.abs(np.asarray(values)[index])
    return float(v.max(initial=0.0))


def interior_rms(values: np.ndarray, index: tuple = ()) -> float:
    v = np.abs(np.asarray(values)[index])
    return float(np.sqrt(np.mean(v**2))) if v.size else 0.0
