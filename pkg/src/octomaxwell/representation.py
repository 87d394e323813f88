"""4x4 matrix images of octonions over the (e0, e7) plane.

``pi`` is the linear map that places the complex-pair components Y0..Y3 of
an octonion into a fixed sign/index pattern.  Matrix algebras are
associative and the octonions are not, so ``pi`` is multiplicative only on
the quaternion span of (e0, e1, e2, e3); see ``tests/test_representation.py``
for the e1*e4 counterexample.
"""

from __future__ import annotations

import numpy as np

from .octonion import ComplexScalar, Octonion, coefficients_to_complex, to_complex_pairs

__all__ = [
    "PI_PATTERN",
    "RepMatrix",
    "pi",
    "pi_array",
    "read_pattern",
    "rep_mul",
    "pauli_image",
    "real_quat_image",
    "kron_quat_image",
    "J",
]

# (sign, component index) for every entry of pi(O), row-major.
PI_PATTERN: tuple[tuple[tuple[int, int], ...], ...] = (
    ((+1, 0), (-1, 3), (-1, 2), (-1, 1)),
    ((+1, 3), (+1, 0), (+1, 1), (-1, 2)),
    ((+1, 2), (-1, 1), (+1, 0), (+1, 3)),
    ((+1, 1), (+1, 2), (-1, 3), (+1, 0)),
)

_SIGN = np.array([[s for s, _ in row] for row in PI_PATTERN], dtype=float)
_INDEX = np.array([[k for _, k in row] for row in PI_PATTERN], dtype=int)


class RepMatrix:
    """4x4 matrix with entries in the (e0, e7) plane, stored as complex128."""

    __slots__ = ("m",)

    def __init__(self, m):
        arr = np.array(m, dtype=complex)
        if arr.shape != (4, 4):
            raise ValueError(f"RepMatrix must be 4x4, got {arr.shape}")
        arr.setflags(write=False)
        self.m = arr

    @classmethod
    def identity(cls) -> RepMatrix:
        return cls(np.eye(4))

    def entry(self, i: int, j: int) -> ComplexScalar:
        return ComplexScalar.from_complex(self.m[i, j])

    def __matmul__(self, other: RepMatrix) -> RepMatrix:
        return rep_mul(self, other)

    def __add__(self, other: RepMatrix) -> RepMatrix:
        return RepMatrix(self.m + other.m)

    def __sub__(self, other: RepMatrix) -> RepMatrix:
        return RepMatrix(self.m - other.m)

    def __neg__(self) -> RepMatrix:
        return RepMatrix(-self.m)

    def scale(self, c: ComplexScalar | complex | float) -> RepMatrix:
        return RepMatrix(complex(c) * self.m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepMatrix):
            return NotImplemented
        return bool(np.array_equal(self.m, other.m))

    def __hash__(self) -> int:
        return hash(self.m.tobytes())

    def __repr__(self) -> str:
        return f"RepMatrix({self.m.tolist()!r})"


def pi_array(Y: np.ndarray) -> np.ndarray:
    """Place components ``Y[0..3]`` (any trailing shape) into the 4x4 pattern.

    Returns an array of shape ``(4, 4) + Y.shape[1:]``.
    """
    Y = np.asarray(Y)
    sign = _SIGN.reshape((4, 4) + (1,) * (Y.ndim - 1))
    return sign * Y[_INDEX]


def pi(a: Octonion) -> RepMatrix:
    Y = to_complex_pairs(a).as_complex()
    return RepMatrix(_SIGN * Y[_INDEX])


def read_pattern(m: np.ndarray, strict: bool = False, atol: float = 0.0) -> np.ndarray:
    """Recover ``Y0..Y3`` from a matrix in the pi pattern (first column).

    With ``strict`` every one of the 16 entries is checked against the
    pattern and ``ValueError`` is raised on a mismatch larger than ``atol``.
    """
    m = np.asarray(m)
    Y = np.stack([m[0, 0], m[3, 0], m[2, 0], m[1, 0]])
    if strict:
        expected = pi_array(Y)
        if np.max(np.abs(expected - m), initial=0.0) > atol:
            raise ValueError("matrix does not follow the pi entry pattern")
    return Y


def rep_mul(A: RepMatrix, B: RepMatrix) -> RepMatrix:
    return RepMatrix(A.m @ B.m)


def octonion_from_rep(m: RepMatrix) -> Octonion:
    Y = read_pattern(m.m, strict=True, atol=1e-12)
    y = np.empty(8)
    y[[0, 1, 2, 3]] = Y.real
    y[[7, 4, 5, 6]] = Y.imag
    return Octonion(y)


_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

J = np.array([[0.0, 1.0], [-1.0, 0.0]])
_ONE = np.eye(2)


def pauli_image(j: int) -> np.ndarray:
    """2x2 complex image of quaternion unit j: identity, then ``-i sigma_j``."""
    if j not in (0, 1, 2, 3):
        raise IndexError(f"quaternion index must be 0..3, got {j}")
    if j == 0:
        return _PAULI[0].copy()
    return -1j * _PAULI[j]


_REAL_BLOCKS = (
    np.block([[_ONE, 0 * _ONE], [0 * _ONE, _ONE]]),
    np.block([[0 * _ONE, -J], [-J, 0 * _ONE]]),
    np.block([[0 * _ONE, -_ONE], [_ONE, 0 * _ONE]]),
    np.block([[-J, 0 * _ONE], [0 * _ONE, J]]),
)


def real_quat_image(j: int) -> np.ndarray:
    """Real 4x4 block matrix standing for quaternion unit j."""
    if j not in (0, 1, 2, 3):
        raise IndexError(f"quaternion index must be 0..3, got {j}")
    return _REAL_BLOCKS[j].copy()


def kron_quat_image(j: int) -> np.ndarray:
    """Same matrices built from tensor products with ``i`` replaced by J.

    Written left factor first, ``A (x) B`` here is ``np.kron(B, A)``: the left
    factor acts inside each 2x2 block.  Unit 3 uses ``-J (x) sigma3``.
    """
    if j not in (0, 1, 2, 3):
        raise IndexError(f"quaternion index must be 0..3, got {j}")
    sigma1 = _PAULI[1].real
    sigma3 = _PAULI[3].real
    left, right = ((_ONE, _ONE), (-J, sigma1), (_ONE, -J), (-J, sigma3))[j]
    return np.kron(right, left)


def pi_of_coefficients(y: np.ndarray) -> np.ndarray:
    """pi applied to raw octonion coefficients ``(8, ...)``."""
    return pi_array(coefficients_to_complex(y))
