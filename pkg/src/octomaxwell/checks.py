"""Property suites behind ``octomaxwell algebra-check``.

Each check returns a :class:`CheckResult` with the worst error seen.  The
multiplication-table check compares against :func:`brute_force_table`,
which expands the defining relations directly (Kronecker delta plus every
permutation of the seven triples) and never touches the structure-constant
object used by :func:`~octomaxwell.octonion.mul`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import permutations

import numpy as np

from .octonion import (
    DEFAULT_CONSTANTS,
    TRIPLES,
    Octonion,
    StructureConstants,
    basis,
    mul,
    norm,
)

__all__ = [
    "CheckResult",
    "brute_force_table",
    "run_all",
    "check_table",
    "check_antisymmetry",
    "check_norm_composition",
    "check_alternativity",
    "check_nonassociativity",
    "check_subalgebra_closure",
]

DEFAULT_SEED = 20240611
DEFAULT_SAMPLES = 1000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_error: float
    tolerance: float
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def brute_force_table(triples=TRIPLES) -> np.ndarray:
    """Integer table ``T[a, b, c]``: coefficient of e_c in e_a e_b."""
    T = np.zeros((8, 8, 8), dtype=np.int64)
    for a in range(8):
        T[0, a, a] = 1
        T[a, 0, a] = 1
    for a in range(1, 8):
        for b in range(1, 8):
            if a == b:
                T[a, b, 0] -= 1
                continue
            for triple in triples:
                for perm in permutations(triple):
                    if perm[0] == a and perm[1] == b:
                        even = perm in (triple, triple[1:] + triple[:1], triple[2:] + triple[:2])
                        T[a, b, perm[2]] += 1 if even else -1
    return T


def check_table(constants: StructureConstants = DEFAULT_CONSTANTS) -> CheckResult:
    oracle = brute_force_table()
    worst = 0
    bad = []
    for a in range(8):
        for b in range(8):
            got = mul(basis(a), basis(b), constants).y
            diff = int(np.max(np.abs(got - oracle[a, b])))
            if diff:
                bad.append(f"e{a}e{b}")
            worst = max(worst, diff)
    return CheckResult(
        "multiplication_table", worst == 0, float(worst), 0.0, ", ".join(bad[:8]) if bad else "64/64 exact"
    )


def check_antisymmetry(constants: StructureConstants = DEFAULT_CONSTANTS) -> CheckResult:
    t = constants.table.astype(int)
    worst = 0
    for p in permutations(range(3)):
        sign = 1 if p in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1
        worst = max(worst, int(np.max(np.abs(t - sign * np.transpose(t, p)))))
    return CheckResult("antisymmetry", worst == 0, float(worst), 0.0)


def _random_octonions(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=(count, 8))


def check_norm_composition(
    constants: StructureConstants = DEFAULT_CONSTANTS, seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES
) -> CheckResult:
    rng = np.random.default_rng(seed)
    A, B = _random_octonions(rng, samples), _random_octonions(rng, samples)
    worst = 0.0
    for a, b in zip(A, B):
        oa, ob = Octonion(a), Octonion(b)
        scale = norm(oa) * norm(ob)
        worst = max(worst, abs(norm(mul(oa, ob, constants)) - scale) / scale)
    return CheckResult("norm_composition", worst <= 1e-12, worst, 1e-12, f"seed={seed}, samples={samples}")


def _assoc(a, b, c, constants):
    return mul(mul(a, b, constants), c, constants) - mul(a, mul(b, c, constants), constants)


def check_alternativity(
    constants: StructureConstants = DEFAULT_CONSTANTS, seed: int = DEFAULT_SEED + 1, samples: int = DEFAULT_SAMPLES
) -> CheckResult:
    rng = np.random.default_rng(seed)
    A, B = _random_octonions(rng, samples), _random_octonions(rng, samples)
    worst = 0.0
    for a, b in zip(A, B):
        oa, ob = Octonion(a), Octonion(b)
        scale = norm(oa) ** 2 * norm(ob) + norm(oa) * norm(ob) ** 2
        err = max(norm(_assoc(oa, oa, ob, constants)), norm(_assoc(oa, ob, ob, constants)))
        worst = max(worst, err / scale)
    return CheckResult("alternativity", worst <= 1e-12, worst, 1e-12, f"seed={seed}, samples={samples}")


def check_nonassociativity(constants: StructureConstants = DEFAULT_CONSTANTS) -> CheckResult:
    got = _assoc(basis(1), basis(2), basis(4), constants)
    expected = -2.0 * basis(5)
    worst = float(np.max(np.abs(got.y - expected.y)))
    return CheckResult("nonassociativity_witness", worst == 0.0, worst, 0.0, "(e1 e2) e4 - e1 (e2 e4) = -2 e5")


def check_subalgebra_closure(constants: StructureConstants = DEFAULT_CONSTANTS) -> CheckResult:
    worst = 0.0
    for span in ((0, 1, 2, 3), (0, 7)):
        outside = [k for k in range(8) if k not in span]
        for a in span:
            for b in span:
                y = mul(basis(a), basis(b), constants).y
                worst = max(worst, float(np.max(np.abs(y[outside]))))
    return CheckResult("subalgebra_closure", worst == 0.0, worst, 0.0, "spans {e0,e1,e2,e3} and {e0,e7}")


def run_all(constants: StructureConstants = DEFAULT_CONSTANTS, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    return [
        check_table(constants),
        check_antisymmetry(constants),
        check_norm_composition(constants, seed=seed),
        check_alternativity(constants, seed=seed + 1),
        check_nonassociativity(constants),
        check_subalgebra_closure(constants),
    ]
