"""Named analytic scenarios sampled onto lattices.

Field generators return a :class:`FieldGrid4D`; residual scenarios return a
:class:`ScenarioCase` bundling a Maxwell state, its time derivatives and
the interior index used for norms.  Both registries are keyed by the names
the CLI and config files use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .calculus import ONE_SIDED, PERIODIC, FieldGrid4D, Lattice4D, OctonionField, apply_D_wick
from .maxwell import (
    MaxwellResiduals,
    MaxwellState,
    SpatialLattice,
    continuity_residuals,
    dalembertian,
    eight_component_split,
    extract_state,
    residuals,
    residuals_from_components,
    time_derivatives,
)

__all__ = [
    "FIELD_GENERATORS",
    "SCENARIOS",
    "ScenarioCase",
    "build_scenario",
    "random_trig_field",
    "quaternion_product",
]

TWO_PI = 2.0 * math.pi
THIN = 4


def quaternion_product(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Product of quaternions with commuting (complex) coefficients.

    ``p`` and ``q`` have a leading axis of length 4 (e0..e3); e1 e2 = e3 and
    cyclic, e_j^2 = -1.
    """
    p0, p1, p2, p3 = p
    q0, q1, q2, q3 = q
    return np.stack(
        [
            p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
            p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
            p0 * q2 + p2 * q0 + p3 * q1 - p1 * q3,
            p0 * q3 + p3 * q0 + p1 * q2 - p2 * q1,
        ]
    )


def random_trig_field(lattice: Lattice4D, rng: np.random.Generator, modes: int = 4) -> FieldGrid4D:
    """Smooth random field: a few integer-wavenumber Fourier modes per component.

    Wavenumbers are integers in units of ``2 pi / L`` per axis, so the field
    is periodic on the lattice box.
    """
    x = lattice.mesh()
    lengths = [n * h for n, h in zip(lattice.n, lattice.h)]
    Y = np.zeros((4,) + lattice.n, dtype=complex)
    for k in range(4):
        for _ in range(modes):
            m = rng.integers(-2, 3, size=4)
            amp = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            phase = sum(TWO_PI * m[a] * x[a] / lengths[a] for a in range(4))
            Y[k] = Y[k] + amp * np.exp(1j * (phase + rng.uniform(0, TWO_PI)))
    return FieldGrid4D(lattice, Y)


def _polynomial_field(lattice: Lattice4D, component: int = 0, axis: int = 1, scale: complex = 1.0):
    x = lattice.mesh()
    Y = np.zeros((4,) + lattice.n, dtype=complex)
    Y[component] = scale * (x[axis] + 0 * sum(x))
    return FieldGrid4D(lattice, Y)


FIELD_GENERATORS: dict[str, Callable[..., FieldGrid4D]] = {
    "zero": lambda lattice, **_: FieldGrid4D.zeros(lattice),
    "random-trig": lambda lattice, seed=0, modes=4: random_trig_field(
        lattice, np.random.default_rng(seed), modes
    ),
    "linear": _polynomial_field,
}


@dataclass
class ScenarioCase:
    """Everything needed to report residuals for one scenario at one resolution."""

    name: str
    h: float
    state: MaxwellState
    dE_dt: np.ndarray
    dH_dt: np.ndarray
    index: tuple
    grid: FieldGrid4D | None = None
    lattice4: Lattice4D | None = None
    continuity_index: tuple | None = None
    notes: dict = field(default_factory=dict)

    def residuals(self) -> MaxwellResiduals:
        return residuals(self.state, self.dE_dt, self.dH_dt)

    def derivative(self) -> OctonionField | None:
        return None if self.grid is None else apply_D_wick(self.grid)

    def component_residuals(self) -> MaxwellResiduals | None:
        dO = self.derivative()
        return None if dO is None else residuals_from_components(eight_component_split(dO))

    def continuity(self) -> tuple[np.ndarray, np.ndarray] | None:
        if self.grid is None or not self.state.batch_shape:
            return None
        return continuity_residuals(self.state)

    def wave_operator(self) -> np.ndarray | None:
        if self.grid is None:
            return None
        return dalembertian(self.grid.Y[0], self.lattice4)


def _case_from_field(name, f: FieldGrid4D, h: float, time_width: int = 1, **notes) -> ScenarioCase:
    lat = f.lattice
    dE, dH = time_derivatives(f)
    interior = lat.interior(1)
    if lat.boundary[0] == ONE_SIDED:
        interior = (slice(time_width, lat.n[0] - time_width),) + interior[1:]
    # continuity drops one slice per end; index relative to the shortened axis
    t_cont = slice(None) if lat.boundary[0] == PERIODIC else slice(max(time_width - 1, 0), lat.n[0] - 2 - max(time_width - 1, 0))
    return ScenarioCase(
        name=name,
        h=h,
        state=extract_state(f),
        dE_dt=dE,
        dH_dt=dH,
        index=interior,
        grid=f,
        lattice4=lat,
        continuity_index=(t_cont,) + lat.interior(1)[1:],
        notes=notes,
    )


def _commensurate(k: float, length: float) -> bool:
    cycles = k * length / TWO_PI
    return abs(cycles - round(cycles)) < 1e-9


def zero_scenario(n: int = 16, h: float | None = None) -> ScenarioCase:
    h = TWO_PI / n if h is None else float(h)
    lat = Lattice4D((THIN, n, THIN, THIN), (h, h, h, h))
    return _case_from_field("zero", FieldGrid4D.zeros(lat), h)


def plane_wave_scenario(
    n: int = 16, h: float | None = None, amplitude: float = 1.0, k: int = 1, courant: float = 0.5
) -> ScenarioCase:
    """Vacuum wave along x1: E = y^ A cos(k(x1 - x0)), H = z^ A cos(k(x1 - x0)).

    Time is sampled at ``courant * h`` so the space and time truncation errors
    do not cancel.
    """
    h = TWO_PI / n if h is None else float(h)
    length = n * h
    nt = int(round(n / courant))
    ht = courant * h
    periodic = _commensurate(k, length) and abs(nt * ht - length) < 1e-9 * length
    bx = PERIODIC if _commensurate(k, length) else ONE_SIDED
    bt = PERIODIC if periodic else ONE_SIDED
    lat = Lattice4D((nt, n, THIN, THIN), (ht, h, h, h), boundary=(bt, bx, PERIODIC, PERIODIC))
    x0, x1, _, _ = lat.mesh()
    wave = amplitude * np.cos(k * (x1 - x0)) * np.ones(lat.n)
    Y = np.zeros((4,) + lat.n, dtype=complex)
    Y[2] = wave
    Y[3] = 1j * wave
    return _case_from_field("plane-wave", FieldGrid4D(lat, Y), h)


def potential_wave_field(
    lattice: Lattice4D,
    k=(1.0, 1.0, 0.0),
    coefficients=(1.0, 0.5j, 0.3, -0.2 + 0.4j),
) -> FieldGrid4D:
    """Y = conj(D) Phi for a null plane wave Phi = c cos(k.x - w x0), w = |k|.

    Applying the (Wick-form) derivative to ``conj(D) Phi`` gives minus the wave
    operator of Phi, which vanishes, so the Maxwell residuals are zero
    analytically while the Y0-derived sources are not.
    """
    k = np.asarray(k, dtype=float)
    omega = float(np.linalg.norm(k))
    # config files spell complex numbers as [re, im]
    c = np.array([complex(*v) if isinstance(v, (list, tuple)) else complex(v) for v in coefficients])
    if c.shape != (4,):
        raise ValueError("potential-wave needs 4 coefficients")
    x0, x1, x2, x3 = lattice.mesh()
    phase = k[0] * x1 + k[1] * x2 + k[2] * x3 - omega * x0
    gprime = -np.sin(phase) * np.ones(lattice.n)
    # conj(D) = -e7 d0 - e_j d_j acting on g(phase): d0 g = -w g', d_j g = k_j g'
    symbol = np.array([1j * omega, -k[0], -k[1], -k[2]], dtype=complex)
    Y = quaternion_product(symbol, c)[:, None, None, None, None] * gprime
    return FieldGrid4D(lattice, Y)


def potential_wave_scenario(
    n: int = 16,
    h: float | None = None,
    k=(1, 1, 0),
    coefficients=(1.0, 0.5j, 0.3, -0.2 + 0.4j),
    courant: float = 0.5,
    nt: int = 8,
) -> ScenarioCase:
    """Sources from a wave-equation Y0 with fields solving all four equations."""
    h = TWO_PI / n if h is None else float(h)
    length = n * h
    k = tuple(float(v) for v in k)
    sizes, bounds = [], []
    for kv in k:
        if kv == 0:
            sizes.append(THIN)
            bounds.append(PERIODIC)
        else:
            sizes.append(n)
            bounds.append(PERIODIC if _commensurate(kv, length) else ONE_SIDED)
    lat = Lattice4D(
        (nt,) + tuple(sizes), (courant * h, h, h, h), boundary=(ONE_SIDED,) + tuple(bounds)
    )
    f = potential_wave_field(lat, k, coefficients)
    return _case_from_field("potential-wave", f, h, time_width=2)


def _static_case(name, lat: SpatialLattice, h: float, E, H, rho_e, rho_m) -> ScenarioCase:
    zero = np.zeros((3,) + lat.n)
    state = MaxwellState(lat, E, H, rho_e, rho_m, zero, zero)
    return ScenarioCase(name=name, h=h, state=state, dE_dt=zero, dH_dt=zero, index=lat.interior(1))


def static_gauss_scenario(n: int = 16, h: float | None = None, amplitude: float = 1.0) -> ScenarioCase:
    """E = grad(phi), phi = A sin x1 sin x2 sin x3, rho_e = lap(phi) sampled exactly."""
    h = TWO_PI / n if h is None else float(h)
    lat = SpatialLattice((n, n, n), (h, h, h))
    x1, x2, x3 = lat.mesh()
    s1, s2, s3 = np.sin(x1), np.sin(x2), np.sin(x3)
    c1, c2, c3 = np.cos(x1), np.cos(x2), np.cos(x3)
    E = amplitude * np.stack([c1 * s2 * s3, s1 * c2 * s3, s1 * s2 * c3])
    rho_e = -3.0 * amplitude * s1 * s2 * s3
    return _static_case("static-gauss", lat, h, E, np.zeros_like(E), rho_e, np.zeros_like(rho_e))


def _gaussian_potential(lat: SpatialLattice, sigma: float, amplitude: float):
    x = lat.mesh()
    r2 = sum(xi**2 for xi in x)
    psi = amplitude * np.exp(-r2 / (2.0 * sigma**2))
    grad = np.stack([-(xi / sigma**2) * psi for xi in x])
    lap = (r2 / sigma**4 - 3.0 / sigma**2) * psi
    return grad, lap


def _gauss_lattice(n: int, h: float | None, half_width: float) -> tuple[SpatialLattice, float]:
    h = 2.0 * half_width / (n - 1) if h is None else float(h)
    origin = -0.5 * h * (n - 1)
    return SpatialLattice((n, n, n), (h, h, h), (origin,) * 3, ONE_SIDED), h


def monopole_gauss_scenario(
    n: int = 32, h: float | None = None, sigma: float = 1.0, amplitude: float = 1.0, half_width: float = 2.0
) -> ScenarioCase:
    """Gaussian magnetic charge: H = grad(psi), rho_m = lap(psi), E = 0."""
    lat, h = _gauss_lattice(n, h, half_width)
    H, rho_m = _gaussian_potential(lat, sigma, amplitude)
    return _static_case("monopole-gauss", lat, h, np.zeros_like(H), H, np.zeros_like(rho_m), rho_m)


def electric_gauss_scenario(
    n: int = 32, h: float | None = None, sigma: float = 1.0, amplitude: float = 1.0, half_width: float = 2.0
) -> ScenarioCase:
    """Gaussian electric charge: E = grad(phi), rho_e = lap(phi), H = 0."""
    lat, h = _gauss_lattice(n, h, half_width)
    E, rho_e = _gaussian_potential(lat, sigma, amplitude)
    return _static_case("electric-gauss", lat, h, E, np.zeros_like(E), rho_e, np.zeros_like(rho_e))


SCENARIOS: dict[str, Callable[..., ScenarioCase]] = {
    "zero": zero_scenario,
    "plane-wave": plane_wave_scenario,
    "potential-wave": potential_wave_scenario,
    "static-gauss": static_gauss_scenario,
    "monopole-gauss": monopole_gauss_scenario,
    "electric-gauss": electric_gauss_scenario,
}


def build_scenario(name: str, n: int, h: float | None = None, **params) -> ScenarioCase:
    try:
        factory = SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(sorted(SCENARIOS))}") from None
    return factory(n=n, h=h, **params)
