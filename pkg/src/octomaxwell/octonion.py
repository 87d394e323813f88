"""Octonion arithmetic over the basis e0..e7.

Products of imaginary units follow

    e_a e_b = -delta_ab e0 + f_abc e_c        (a, b, c = 1..7)

with ``f`` completely antisymmetric and equal to +1 on the cyclic orbits of
the seven triples in :data:`TRIPLES`.  The sub-algebra spanned by (e0, e7)
is a copy of the complex numbers; :class:`ComplexScalar` models it and
:func:`to_complex_pairs` rewrites an octonion as ``Y0 e0 + Y1 e1 + Y2 e2 + Y3 e3``
with ``Y_k`` in that plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "TRIPLES",
    "StructureConstants",
    "DEFAULT_CONSTANTS",
    "Octonion",
    "ComplexScalar",
    "ComplexPairForm",
    "basis",
    "mul",
    "conjugate",
    "norm",
    "commutator",
    "anticommutator",
    "associator",
    "to_complex_pairs",
    "from_complex_pairs",
]

TRIPLES: tuple[tuple[int, int, int], ...] = (
    (1, 2, 3),
    (4, 7, 1),
    (2, 5, 7),
    (1, 6, 5),
    (6, 2, 4),
    (5, 4, 3),
    (7, 3, 6),
)


def _parity(perm: Sequence[int]) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


class StructureConstants:
    """Signed table ``f[a, b, c]`` for a, b, c in 1..7.

    Stored as an 8x8x8 int8 array so that indices match basis labels;
    row/column 0 is identically zero.
    """

    __slots__ = ("table", "_mul_tensor")

    def __init__(self, table: np.ndarray):
        table = np.asarray(table, dtype=np.int8)
        if table.shape != (8, 8, 8):
            raise ValueError(f"structure table must be 8x8x8, got {table.shape}")
        table = table.copy()
        table.setflags(write=False)
        self.table = table
        self._mul_tensor = None

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[int, int, int]] = TRIPLES) -> StructureConstants:
        table = np.zeros((8, 8, 8), dtype=np.int8)
        for triple in triples:
            for perm in permutations(range(3)):
                a, b, c = (triple[k] for k in perm)
                table[a, b, c] = _parity(perm)
        return cls(table)

    def __call__(self, a: int, b: int, c: int) -> int:
        return int(self.table[a, b, c])

    def flipped(self, a: int, b: int, c: int) -> StructureConstants:
        """Copy with the single entry f[a, b, c] negated (or set to 1 if zero).

        Used as a fault-injection hook; the result is no longer antisymmetric.
        """
        table = self.table.copy()
        table[a, b, c] = -table[a, b, c] if table[a, b, c] else 1
        return StructureConstants(table)

    def is_antisymmetric(self) -> bool:
        t = self.table
        return all(
            np.array_equal(t, _parity(p) * np.transpose(t, p)) for p in permutations(range(3))
        )

    @property
    def mul_tensor(self) -> np.ndarray:
        """``M[a, b, c]`` = coefficient of e_c in e_a e_b, for a, b, c in 0..7."""
        if self._mul_tensor is None:
            m = self.table.astype(float)
            for a in range(8):
                m[0, a, a] = 1.0
                m[a, 0, a] = 1.0
            for a in range(1, 8):
                m[a, a, 0] = -1.0
            m.setflags(write=False)
            self._mul_tensor = m
        return self._mul_tensor


DEFAULT_CONSTANTS = StructureConstants.from_triples()


class Octonion:
    """Immutable octonion ``y0 e0 + y1 e1 + ... + y7 e7``."""

    __slots__ = ("y",)

    def __init__(self, y: Iterable[float]):
        arr = np.array(list(y) if not isinstance(y, np.ndarray) else y, dtype=float).reshape(-1)
        if arr.shape != (8,):
            raise ValueError(f"an octonion needs 8 coefficients, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("octonion coefficients must be finite")
        arr.setflags(write=False)
        self.y = arr

    @classmethod
    def zero(cls) -> Octonion:
        return cls(np.zeros(8))

    @classmethod
    def basis(cls, a: int) -> Octonion:
        if not 0 <= a <= 7:
            raise ValueError(f"basis index must be in 0..7, got {a}")
        y = np.zeros(8)
        y[a] = 1.0
        return cls(y)

    @property
    def real(self) -> float:
        return float(self.y[0])

    def __getitem__(self, k: int) -> float:
        return float(self.y[k])

    def __iter__(self):
        return iter(self.y.tolist())

    def __add__(self, other: Octonion) -> Octonion:
        if not isinstance(other, Octonion):
            return NotImplemented
        return Octonion(self.y + other.y)

    def __sub__(self, other: Octonion) -> Octonion:
        if not isinstance(other, Octonion):
            return NotImplemented
        return Octonion(self.y - other.y)

    def __neg__(self) -> Octonion:
        return Octonion(-self.y)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return mul(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Octonion(self.y * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Octonion(self.y * float(other))
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, Octonion):
            return NotImplemented
        return bool(np.array_equal(self.y, other.y))

    def __hash__(self) -> int:
        return hash(self.y.tobytes())

    def __abs__(self) -> float:
        return norm(self)

    def conjugate(self) -> Octonion:
        return conjugate(self)

    def isclose(self, other: Octonion, atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.y - other.y)) <= atol)

    def __repr__(self) -> str:
        return f"Octonion({self.y.tolist()!r})"

    def __str__(self) -> str:
        return format_octonion(self)


def format_octonion(a: Octonion, digits: int = 17) -> str:
    """Render as ``y0 + y1 e1 + ...``, dropping zero terms; unit terms print as ``e<k>``."""
    terms = []
    for k, v in enumerate(a.y):
        if v == 0:
            continue
        mag = abs(v)
        if k == 0:
            body = f"{mag:.{digits}g}"
        elif mag == 1:
            body = f"e{k}"
        else:
            body = f"{mag:.{digits}g} e{k}"
        sign = "-" if v < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def basis(a: int) -> Octonion:
    return Octonion.basis(a)


def mul(a: Octonion, b: Octonion, constants: StructureConstants = DEFAULT_CONSTANTS) -> Octonion:
    """Bilinear octonion product ``a b``."""
    return Octonion(np.einsum("i,j,ijk->k", a.y, b.y, constants.mul_tensor))


def conjugate(a: Octonion) -> Octonion:
    y = -a.y
    y[0] = a.y[0]
    return Octonion(y)


def norm(a: Octonion) -> float:
    return math.sqrt(float(np.dot(a.y, a.y)))


def commutator(a: Octonion, b: Octonion) -> Octonion:
    return mul(a, b) - mul(b, a)


def anticommutator(a: Octonion, b: Octonion) -> Octonion:
    return mul(a, b) + mul(b, a)


def associator(a: Octonion, b: Octonion, c: Octonion) -> Octonion:
    """``(ab)c - a(bc)``; alternating in its three arguments."""
    return mul(mul(a, b), c) - mul(a, mul(b, c))


@dataclass(frozen=True)
class ComplexScalar:
    """Element ``re e0 + im e7`` of the commutative (e0, e7) plane."""

    re: float = 0.0
    im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError("ComplexScalar parts must be finite")

    @classmethod
    def from_complex(cls, z: complex) -> ComplexScalar:
        return cls(float(z.real), float(z.imag))

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __add__(self, other: ComplexScalar) -> ComplexScalar:
        return ComplexScalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other: ComplexScalar) -> ComplexScalar:
        return ComplexScalar(self.re - other.re, self.im - other.im)

    def __neg__(self) -> ComplexScalar:
        return ComplexScalar(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, ComplexScalar):
            # e7^2 = -e0
            return ComplexScalar(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, float)):
            return ComplexScalar(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def to_octonion(self) -> Octonion:
        y = np.zeros(8)
        y[0], y[7] = self.re, self.im
        return Octonion(y)


@dataclass(frozen=True)
class ComplexPairForm:
    """``O = Y0 e0 + Y1 e1 + Y2 e2 + Y3 e3`` with each ``Yk`` in the (e0, e7) plane."""

    Y: tuple[ComplexScalar, ComplexScalar, ComplexScalar, ComplexScalar]

    def __post_init__(self):
        if len(self.Y) != 4:
            raise ValueError("ComplexPairForm needs exactly 4 components")

    def as_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.Y])


def to_complex_pairs(a: Octonion) -> ComplexPairForm:
    y = a.y
    return ComplexPairForm(
        (
            ComplexScalar(float(y[0]), float(y[7])),
            ComplexScalar(float(y[1]), float(y[4])),
            ComplexScalar(float(y[2]), float(y[5])),
            ComplexScalar(float(y[3]), float(y[6])),
        )
    )


def from_complex_pairs(p: ComplexPairForm) -> Octonion:
    Y0, Y1, Y2, Y3 = p.Y
    return Octonion([Y0.re, Y1.re, Y2.re, Y3.re, Y1.im, Y2.im, Y3.im, Y0.im])


def complex_to_coefficients(Y: np.ndarray) -> np.ndarray:
    """Map complex-pair arrays ``(4, ...)`` to octonion coefficients ``(8, ...)``."""
    Y = np.asarray(Y)
    return np.stack(
        [Y[0].real, Y[1].real, Y[2].real, Y[3].real, Y[1].imag, Y[2].imag, Y[3].imag, Y[0].imag]
    )


def coefficients_to_complex(y: np.ndarray) -> np.ndarray:
    """Inverse of :func:`complex_to_coefficients`."""
    y = np.asarray(y, dtype=float)
    return np.stack([y[0] + 1j * y[7], y[1] + 1j * y[4], y[2] + 1j * y[5], y[3] + 1j * y[6]])
