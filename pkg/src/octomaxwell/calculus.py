"""Sampled (e0, e7)-plane fields on a 4D lattice and the octonionic derivative.

A :class:`FieldGrid4D` stores the four complex-pair components Y0..Y3 as a
complex array of shape ``(4, n0, n1, n2, n3)``; the imaginary part of each
sample is its e7 coefficient.  Three routes compute the derivative:

* :func:`apply_D_time` evaluates the closed-form components
  ``[d_t Y0 - d_j Y_j] e0 + [d_j Y0 + d_t Y_j + (curl Y)_j] e_j``;
* :func:`apply_D_matrix` multiplies the 4x4 operator matrix into the 4x4
  image of the field and reads the result back through the same pattern;
* :func:`apply_D_wick` is the time route with ``d_t`` replaced by
  ``-e7 d_0`` (axis 0 read as x0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .octonion import Octonion, complex_to_coefficients, coefficients_to_complex
from .representation import _INDEX, _SIGN, read_pattern

__all__ = [
    "PERIODIC",
    "ONE_SIDED",
    "LatticeError",
    "Lattice4D",
    "FieldGrid4D",
    "OctonionField",
    "diff1",
    "diff2",
    "partial",
    "second_partial",
    "gradients",
    "apply_D_time",
    "apply_D_matrix",
    "apply_D_wick",
]

PERIODIC = "periodic"
ONE_SIDED = "one-sided"
_BOUNDARIES = (PERIODIC, ONE_SIDED)
MIN_POINTS = 4


class LatticeError(ValueError):
    """Raised for malformed lattices, mismatched grids or unusable stencils."""


def _as_boundaries(boundary, ndim: int) -> tuple[str, ...]:
    if isinstance(boundary, str):
        boundary = (boundary,) * ndim
    boundary = tuple(boundary)
    if len(boundary) != ndim:
        raise LatticeError(f"need {ndim} boundary modes, got {len(boundary)}")
    for b in boundary:
        if b not in _BOUNDARIES:
            raise LatticeError(f"unknown boundary mode {b!r}; expected one of {_BOUNDARIES}")
    return boundary


@dataclass(frozen=True)
class Lattice4D:
    """Uniform lattice on (x0, x1, x2, x3).

    ``boundary`` is either one mode for all axes or a 4-tuple; per-axis modes
    let a periodic spatial box carry a non-periodic time window.
    """

    n: tuple[int, int, int, int]
    h: tuple[float, float, float, float]
    origin: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    boundary: str | tuple[str, str, str, str] = PERIODIC

    def __post_init__(self):
        n = tuple(int(v) for v in self.n)
        h = tuple(float(v) for v in self.h)
        origin = tuple(float(v) for v in self.origin)
        if len(n) != 4 or len(h) != 4 or len(origin) != 4:
            raise LatticeError("Lattice4D needs 4 entries for n, h and origin")
        if any(v < 1 for v in n):
            raise LatticeError(f"points per axis must be positive, got {n}")
        if any(not (v > 0 and np.isfinite(v)) for v in h):
            raise LatticeError(f"spacings must be positive and finite, got {h}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "boundary", _as_boundaries(self.boundary, 4))

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.n

    def coords(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.h[axis] * np.arange(self.n[axis])

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays (sparse meshgrid, 'ij' order)."""
        return tuple(np.meshgrid(*(self.coords(a) for a in range(4)), indexing="ij", sparse=True))

    def interior(self, width: int = 1) -> tuple[slice, ...]:
        """Index excluding ``width`` points at each one-sided boundary."""
        return tuple(
            slice(None) if b == PERIODIC else slice(width, n - width)
            for b, n in zip(self.boundary, self.n)
        )

    def refined(self, factor: int = 2) -> Lattice4D:
        return Lattice4D(
            tuple(v * factor for v in self.n),
            tuple(v / factor for v in self.h),
            self.origin,
            self.boundary,
        )


def diff1(values: np.ndarray, array_axis: int, h: float, boundary: str) -> np.ndarray:
    """Second-order first derivative along one array axis.

    Central differences in the interior; periodic wraparound or the
    one-sided stencil ``(-3 f0 + 4 f1 - f2) / 2h`` at the ends.
    """
    f = np.asarray(values)
    n = f.shape[array_axis]
    if n < MIN_POINTS:
        raise LatticeError(f"axis has {n} points; the stencil needs at least {MIN_POINTS}")
    if boundary == PERIODIC:
        return (np.roll(f, -1, axis=array_axis) - np.roll(f, 1, axis=array_axis)) / (2.0 * h)
    if boundary != ONE_SIDED:
        raise LatticeError(f"unknown boundary mode {boundary!r}")
    f = np.moveaxis(f, array_axis, 0)
    out = np.empty_like(f, dtype=np.result_type(f, float))
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    return np.moveaxis(out, 0, array_axis)


def diff2(values: np.ndarray, array_axis: int, h: float, boundary: str) -> np.ndarray:
    """Second-order second derivative along one array axis."""
    f = np.asarray(values)
    n = f.shape[array_axis]
    if n < MIN_POINTS:
        raise LatticeError(f"axis has {n} points; the stencil needs at least {MIN_POINTS}")
    h2 = h * h
    if boundary == PERIODIC:
        return (np.roll(f, -1, axis=array_axis) - 2.0 * f + np.roll(f, 1, axis=array_axis)) / h2
    if boundary != ONE_SIDED:
        raise LatticeError(f"unknown boundary mode {boundary!r}")
    f = np.moveaxis(f, array_axis, 0)
    out = np.empty_like(f, dtype=np.result_type(f, float))
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h2
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2
    out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / h2
    return np.moveaxis(out, 0, array_axis)


def _check_axis(axis: int) -> None:
    if axis not in (0, 1, 2, 3):
        raise LatticeError(f"axis must be 0..3, got {axis}")


def partial(values: np.ndarray, lattice: Lattice4D, axis: int) -> np.ndarray:
    """d/dx_axis of a scalar (real or complex) lattice function.

    Leading batch dimensions are allowed; the lattice occupies the last
    four array axes.
    """
    _check_axis(axis)
    values = np.asarray(values)
    if values.shape[-4:] != lattice.n:
        raise LatticeError(f"values shape {values.shape} does not end in lattice shape {lattice.n}")
    return diff1(values, values.ndim - 4 + axis, lattice.h[axis], lattice.boundary[axis])


def second_partial(values: np.ndarray, lattice: Lattice4D, axis: int) -> np.ndarray:
    _check_axis(axis)
    values = np.asarray(values)
    if values.shape[-4:] != lattice.n:
        raise LatticeError(f"values shape {values.shape} does not end in lattice shape {lattice.n}")
    return diff2(values, values.ndim - 4 + axis, lattice.h[axis], lattice.boundary[axis])


@dataclass(frozen=True)
class FieldGrid4D:
    """Components Y0..Y3 sampled on a lattice; ``Y.shape == (4,) + lattice.n``."""

    lattice: Lattice4D
    Y: np.ndarray = field(repr=False)

    def __post_init__(self):
        Y = np.array(self.Y, dtype=complex)
        if Y.shape != (4,) + self.lattice.n:
            raise LatticeError(f"expected Y of shape {(4,) + self.lattice.n}, got {Y.shape}")
        if not np.all(np.isfinite(Y)):
            raise ValueError("field samples must be finite")
        Y.setflags(write=False)
        object.__setattr__(self, "Y", Y)

    @classmethod
    def zeros(cls, lattice: Lattice4D) -> FieldGrid4D:
        return cls(lattice, np.zeros((4,) + lattice.n, dtype=complex))

    @classmethod
    def from_parts(cls, lattice: Lattice4D, real: np.ndarray, imag: np.ndarray) -> FieldGrid4D:
        """Build from the e0 parts ``Y^(0)`` and e7 parts ``Y^(1)``."""
        return cls(lattice, np.asarray(real) + 1j * np.asarray(imag))

    def __add__(self, other: FieldGrid4D) -> FieldGrid4D:
        _same_lattice(self.lattice, other.lattice)
        return FieldGrid4D(self.lattice, self.Y + other.Y)

    def scaled(self, alpha: complex) -> FieldGrid4D:
        return FieldGrid4D(self.lattice, alpha * self.Y)

    def gradients(self) -> np.ndarray:
        return gradients(self)


@dataclass(frozen=True)
class OctonionField:
    """One octonion per lattice site, stored as coefficients ``(8,) + lattice.n``."""

    lattice: Lattice4D
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float)
        if c.shape != (8,) + self.lattice.n:
            raise LatticeError(f"expected coefficients of shape {(8,) + self.lattice.n}, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("octonion field coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_complex_pairs(cls, lattice: Lattice4D, Z: np.ndarray) -> OctonionField:
        return cls(lattice, complex_to_coefficients(Z))

    def complex_pairs(self) -> np.ndarray:
        return coefficients_to_complex(self.coefficients)

    def at(self, index: Sequence[int]) -> Octonion:
        return Octonion(self.coefficients[(slice(None),) + tuple(index)])

    def interior(self, width: int = 1) -> np.ndarray:
        return self.coefficients[(slice(None),) + self.lattice.interior(width)]


def _same_lattice(a: Lattice4D, b: Lattice4D) -> None:
    if a != b:
        raise LatticeError("fields live on different lattices")


def gradients(f: FieldGrid4D) -> np.ndarray:
    """``G[k, mu] = d_mu Y_k`` as a complex array ``(4, 4) + lattice.n``."""
    lat = f.lattice
    return np.stack([np.stack([partial(f.Y[k], lat, mu) for mu in range(4)]) for k in range(4)])


def _closed_form(G: np.ndarray, time_factor: complex) -> np.ndarray:
    dt = time_factor * G[:, 0]
    Z = np.empty(G.shape[:1] + G.shape[2:], dtype=complex)
    Z[0] = dt[0] - G[1, 1] - G[2, 2] - G[3, 3]
    Z[1] = G[0, 1] + dt[1] + (G[3, 2] - G[2, 3])
    Z[2] = G[0, 2] + dt[2] + (G[1, 3] - G[3, 1])
    Z[3] = G[0, 3] + dt[3] + (G[2, 1] - G[1, 2])
    return Z


def apply_D_time(f: FieldGrid4D, axis0_is_t: bool = True) -> OctonionField:
    """Derivative with axis 0 read as real time t."""
    if not axis0_is_t:
        raise ValueError("apply_D_time reads axis 0 as t; use apply_D_wick for the x0 form")
    return OctonionField.from_complex_pairs(f.lattice, _closed_form(gradients(f), 1.0))


def apply_D_wick(f: FieldGrid4D) -> OctonionField:
    """Derivative after ``e0 t -> e7 x0``: every time partial becomes ``-e7 d_0``."""
    return OctonionField.from_complex_pairs(f.lattice, _closed_form(gradients(f), -1j))


def operator_matrix_product(G: np.ndarray, time_factor: complex = 1.0) -> np.ndarray:
    """Entries of ``D . pi(Y)`` for gradients ``G[k, mu] = d_mu Y_k``.

    ``D`` has the pi pattern with ``d_mu`` in place of ``Y_mu`` (``d_0`` scaled
    by ``time_factor``).  Entry ``(i, k)`` sums ``D[i, j] * pi(Y)[j, k]`` over j,
    each product being ``sign * sign * d_a Y_b``.
    """
    scale = np.array([time_factor, 1.0, 1.0, 1.0])
    out = np.zeros((4, 4) + G.shape[2:], dtype=complex)
    for i in range(4):
        for k in range(4):
            acc = out[i, k]
            for j in range(4):
                a = _INDEX[i, j]
                b = _INDEX[j, k]
                acc += (_SIGN[i, j] * _SIGN[j, k] * scale[a]) * G[b, a]
    return out


def apply_D_matrix(f: FieldGrid4D, check_pattern: bool = True) -> OctonionField:
    """Derivative through the 4x4 matrix product, read back via the pi pattern."""
    G = gradients(f)
    M = operator_matrix_product(G)
    if check_pattern:
        atol = 1e-12 * (1.0 + float(np.max(np.abs(G), initial=0.0)))
        read_pattern(M, strict=True, atol=atol)
    return OctonionField.from_complex_pairs(f.lattice, read_pattern(M))
