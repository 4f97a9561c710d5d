"""
Bipartite behaviors, the chained Bell functional and nonlocality-content bounds.

A behavior is an array ``P[x, y, a, b]`` of shape (m, m, d, d) with 0-based
inputs and outputs. For the chained functional with n inputs, ``A_j`` is
Alice's input j - 1 and ``B_j`` Bob's:

    I = sum_{j<n} (<[A_j - B_j]> + <[B_j - A_{j+1}]>) + <[A_n - B_n]> + <[B_n - A_1 - 1]>

where ``[M]`` is M mod d and ``<[M]> = sum_i i * P([M] = i)``. Local models
give at least d - 1.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import (
    ANGLE_TOL,
    CHAINED_N_CAP,
    CHAINED_ORACLE_TOL,
    FIG1_N_RANGE,
    FIG2_INPUT_RANGE,
    FIG2_PARTIES,
    GRID_POINTS,
    OPTIMIZER_MAX_SWEEPS,
    OPTIMIZER_MIN_IMPROVEMENT,
    OPTIMIZER_WINDOW,
    VALIDATION_TOL,
)
from .data_models import BoundResult, ChainedResult, PairBound, ThresholdResult, ValidationResult
from .exceptions import CapacityError, ConvergenceError, DimensionError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Behavior:
    """Two-party behavior table ``P[x, y, a, b]``."""

    table: np.ndarray

    def __post_init__(self) -> None:
        table = np.asarray(self.table, dtype=float)
        if table.ndim != 4:
            raise DimensionError(f"behavior table must be 4-dimensional, got {table.ndim}")
        m_a, m_b, d_a, d_b = table.shape
        if m_a != m_b or d_a != d_b:
            raise DimensionError(f"parties need equal inputs and outputs, got shape {table.shape}")
        object.__setattr__(self, "table", table)

    @property
    def inputs(self) -> int:
        return int(self.table.shape[0])

    @property
    def outputs(self) -> int:
        return int(self.table.shape[2])

    def marginal_a(self) -> np.ndarray:
        """``P_A(a | x, y)`` with shape (m, m, d)."""
        return self.table.sum(axis=3)

    def marginal_b(self) -> np.ndarray:
        """``P_B(b | x, y)`` with shape (m, m, d)."""
        return self.table.sum(axis=2)

    @classmethod
    def from_records(
        cls,
        records: Iterable[tuple[int, int, int, int, float]],
        inputs: int | None = None,
        outputs: int | None = None,
    ) -> Behavior:
        """Build from ``(x, y, a, b, p)`` rows with 1-based x, y and 0-based a, b.

        Missing entries are zero.
        """
        rows = list(records)
        m = inputs or max(max(r[0], r[1]) for r in rows)
        d = outputs or max(max(r[2], r[3]) for r in rows) + 1
        table = np.zeros((m, m, d, d))
        for x, y, a, b, p in rows:
            if not (1 <= x <= m and 1 <= y <= m and 0 <= a < d and 0 <= b < d):
                raise DomainError(f"entry (x={x}, y={y}, a={a}, b={b}) outside the table")
            table[x - 1, y - 1, a, b] += p
        return cls(table)

    def to_records(self) -> list[tuple[int, int, int, int, float]]:
        m, d = self.inputs, self.outputs
        return [
            (x + 1, y + 1, a, b, float(self.table[x, y, a, b]))
            for x, y, a, b in itertools.product(range(m), range(m), range(d), range(d))
        ]


# =============================================================================
# Reference behaviors
# =============================================================================


def born_behavior(thetas: Sequence[float], phis: Sequence[float]) -> Behavior:
    """|phi+> measured in the equatorial bases cos(t) X + sin(t) Y.

    ``P(a, b | x, y) = (1 + (-1)^(a xor b) cos(theta_x + phi_y)) / 4``
    """
    if len(thetas) != len(phis):
        raise DimensionError("both parties need the same number of settings")
    correlation = np.cos(np.add.outer(np.asarray(thetas), np.asarray(phis)))
    sign = np.array([[1.0, -1.0], [-1.0, 1.0]])
    table = (1.0 + correlation[:, :, None, None] * sign[None, None, :, :]) / 4.0
    return Behavior(table)


def deterministic_behavior(f: Sequence[int], g: Sequence[int], d: int) -> Behavior:
    """Local deterministic strategy ``a = f(x)``, ``b = g(y)``."""
    if len(f) != len(g):
        raise DimensionError("both parties need the same number of settings")
    m = len(f)
    table = np.zeros((m, m, d, d))
    for x, y in itertools.product(range(m), repeat=2):
        table[x, y, f[x] % d, g[y] % d] = 1.0
    return Behavior(table)


def pr_box() -> Behavior:
    """Two-input box with ``a xor b = x * y`` and uniform marginals."""
    table = np.zeros((2, 2, 2, 2))
    for x, y, a, b in itertools.product(range(2), repeat=4):
        if (a ^ b) == x * y:
            table[x, y, a, b] = 0.5
    return Behavior(table)


# =============================================================================
# Validation
# =============================================================================


def validate_behavior(b: Behavior, tol: float = VALIDATION_TOL) -> ValidationResult:
    """Check positivity, normalization and non-signaling; residuals go to ``details``."""
    errors: list[str] = []
    table = b.table
    minimum = float(table.min())
    if minimum < -tol:
        x, y, a, bb = np.unravel_index(int(np.argmin(table)), table.shape)
        errors.append(f"negative probability {minimum:.3e} at x={x + 1}, y={y + 1}, a={a}, b={bb}")

    norms = table.sum(axis=(2, 3))
    normalization = float(np.max(np.abs(norms - 1.0)))
    if normalization > tol:
        x, y = np.unravel_index(int(np.argmax(np.abs(norms - 1.0))), norms.shape)
        errors.append(f"x={x + 1}, y={y + 1} sums to {norms[x, y]:.12f}")

    # Alice: P_A(a|x,y) against y = 1; Bob: P_B(b|x,y) against x = 1
    alice = b.marginal_a()
    alice_dev = np.abs(alice - alice[:, :1, :])
    alice_residual = float(alice_dev.max())
    if alice_residual > tol:
        x, y, a = np.unravel_index(int(np.argmax(alice_dev)), alice_dev.shape)
        errors.append(f"Alice's marginal depends on y at x={x + 1}, y={y + 1}, a={a}")
    bob = b.marginal_b()
    bob_dev = np.abs(bob - bob[:1, :, :])
    bob_residual = float(bob_dev.max())
    if bob_residual > tol:
        x, y, bb = np.unravel_index(int(np.argmax(bob_dev)), bob_dev.shape)
        errors.append(f"Bob's marginal depends on x at x={x + 1}, y={y + 1}, b={bb}")

    result = ValidationResult.failure(errors) if errors else ValidationResult.success()
    result.details = {
        "inputs": b.inputs,
        "outputs": b.outputs,
        "min_probability": minimum,
        "normalization_residual": normalization,
        "signaling_residual_alice": alice_residual,
        "signaling_residual_bob": bob_residual,
    }
    return result


# =============================================================================
# Chained functional
# =============================================================================


def _mod_expectation(block: np.ndarray, sign_a: int, sign_b: int, offset: int) -> float:
    """<[sign_a * a + sign_b * b + offset]> of a d x d outcome block."""
    d = block.shape[0]
    a, b = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    values = np.mod(sign_a * a + sign_b * b + offset, d)
    return float(np.sum(values * block))


def chained_value(b: Behavior, n: int, d: int) -> float:
    """Evaluate the chained functional I_{n,d} on a behavior table."""
    if b.inputs != n or b.outputs != d:
        raise DimensionError(
            f"behavior has {b.inputs} inputs and {b.outputs} outputs, expected {n} and {d}"
        )
    if n < 2:
        raise DomainError("the chained functional needs n >= 2")
    table = b.table
    total = 0.0
    for j in range(n):
        total += _mod_expectation(table[j, j], 1, -1, 0)
        if j < n - 1:
            total += _mod_expectation(table[j + 1, j], -1, 1, 0)
    total += _mod_expectation(table[0, n - 1], -1, 1, -1)
    return total


def _chained_from_angles(thetas: np.ndarray, phis: np.ndarray) -> float:
    """I_{n,2} of :func:`born_behavior` in closed form."""
    same = np.sin((thetas + phis) / 2.0) ** 2
    shifted = np.sin((thetas[1:] + phis[:-1]) / 2.0) ** 2
    closing = np.cos((thetas[0] + phis[-1]) / 2.0) ** 2
    return float(same.sum() + shifted.sum() + closing)


def chained_analytic_minimum(n: int) -> float:
    """2n sin^2(pi / 4n)."""
    return 2 * n * math.sin(math.pi / (4 * n)) ** 2


def _initial_angles(n: int) -> np.ndarray:
    delta = math.pi / (2 * n)
    thetas = np.array([(2 * j - 2) * delta for j in range(1, n + 1)])
    phis = np.array([-(2 * j - 1) * delta for j in range(1, n + 1)])
    return np.concatenate([thetas, phis])


@lru_cache(maxsize=256)
def quantum_chained_minimum(n: int, d: int = 2) -> ChainedResult:
    """Minimize I_{n,2} over equatorial measurements on |phi+>.

    Starts from evenly spaced angles and refines one angle at a time with a
    bounded scalar minimizer until a sweep no longer improves the value.

    Raises:
        DomainError: n < 2 or d != 2.
        ConvergenceError: The result misses 2n sin^2(pi/4n) by more than
            CHAINED_ORACLE_TOL.
    """
    if d != 2:
        raise DomainError("the quantum chained minimum is implemented for d = 2 only")
    if n < 2:
        raise DomainError(f"the chained functional needs n >= 2, got {n}")

    angles = _initial_angles(n)

    def objective(values: np.ndarray) -> float:
        return _chained_from_angles(values[:n], values[n:])

    best = objective(angles)
    for sweep in range(OPTIMIZER_MAX_SWEEPS):
        previous = best
        for index in range(2 * n):
            center = angles[index]

            def along(value: float, index: int = index) -> float:
                trial = angles.copy()
                trial[index] = value
                return objective(trial)

            found = minimize_scalar(
                along,
                bounds=(center - OPTIMIZER_WINDOW, center + OPTIMIZER_WINDOW),
                method="bounded",
                options={"xatol": ANGLE_TOL},
            )
            if found.fun < best:
                angles[index] = found.x
                best = float(found.fun)
        logger.debug(f"Chained n={n}: sweep {sweep + 1} value {best:.15f}")
        if previous - best < OPTIMIZER_MIN_IMPROVEMENT:
            break

    analytic = chained_analytic_minimum(n)
    if abs(best - analytic) > CHAINED_ORACLE_TOL:
        raise ConvergenceError(
            f"chained optimum for n={n} is {best:.10f}, analytic value {analytic:.10f}"
        )
    return ChainedResult(n=n, d=2, value=best, analytic=analytic, angles=tuple(angles))


def chained_grid_minimum(n: int, points: int = GRID_POINTS) -> float:
    """Exhaustive grid minimum of I_{n,2} with theta_1 = 0.

    The angles form a cycle theta_1, phi_1, theta_2, ..., phi_n, theta_1 where
    every term couples neighbours, so a min-plus pass along the chain is exact
    on the grid.
    """
    if n < 2:
        raise DomainError(f"the chained functional needs n >= 2, got {n}")
    grid = 2.0 * math.pi * np.arange(points) / points
    coupling = np.sin(np.add.outer(grid, grid) / 2.0) ** 2
    cost = coupling[0].copy()
    for _ in range(2 * n - 2):
        cost = np.min(cost[:, None] + coupling, axis=0)
    closing = np.cos(grid / 2.0) ** 2
    return float(np.min(cost + closing))


def local_deterministic_values(n: int, d: int = 2) -> list[float]:
    """Chained values of every deterministic local strategy (d^(2n) of them)."""
    values = []
    for f in itertools.product(range(d), repeat=n):
        for g in itertools.product(range(d), repeat=n):
            values.append(chained_value(deterministic_behavior(f, g, d), n, d))
    return values


# =============================================================================
# Bounds
# =============================================================================


def pair_bound_from_chained(value: float, d: int) -> float:
    """Nonlocality content lower bound max(0, 1 - I / (d - 1))."""
    if d < 2:
        raise DomainError(f"need d >= 2, got {d}")
    if value < 0:
        raise DomainError(f"chained values are non-negative, got {value}")
    return max(0.0, 1.0 - value / (d - 1))


def _pair_keys(n_parties: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, n_parties + 1), 2))


def _pair_values(
    values: Sequence[float] | Mapping[tuple[int, int], float] | Sequence[PairBound],
    n_parties: int,
) -> list[float]:
    expected = _pair_keys(n_parties)
    if isinstance(values, Mapping):
        keyed = {(min(k), max(k)): float(v) for k, v in values.items()}
    elif len(values) > 0 and isinstance(values[0], PairBound):
        keyed = {}
        for bound in values:
            assert isinstance(bound, PairBound)
            if bound.key in keyed:
                raise DomainError(f"pair {bound.key} given twice")
            keyed[bound.key] = bound.p_lower
    else:
        numbers = [float(v) for v in values]  # type: ignore[arg-type]
        if len(numbers) != len(expected):
            raise DomainError(
                f"need {len(expected)} pair values for N={n_parties}, got {len(numbers)}"
            )
        return numbers
    if set(keyed) != set(expected):
        missing = sorted(set(expected) - set(keyed))
        extra = sorted(set(keyed) - set(expected))
        raise DomainError(f"pair values mismatch: missing {missing}, extra {extra}")
    return [keyed[key] for key in expected]


def theorem2_bound(
    pair_bounds: Sequence[float] | Mapping[tuple[int, int], float] | Sequence[PairBound],
    n_parties: int,
) -> BoundResult:
    """Aggregate bound 1 - (1/(N-1)) * sum_{a<b} (1 - p_ab), raw and clamped to [0, 1]."""
    if n_parties < 2:
        raise DomainError(f"need N >= 2, got {n_parties}")
    values = _pair_values(pair_bounds, n_parties)
    for value in values:
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"pair bound {value} outside [0, 1]")
    raw = 1.0 - sum(1.0 - v for v in values) / (n_parties - 1)
    return BoundResult(
        n_parties=n_parties, raw=raw, clamped=min(1.0, max(0.0, raw)), source="pair_bounds"
    )


def bound_from_chained_values(
    values: Sequence[float] | Mapping[tuple[int, int], float],
    n_parties: int,
    d: int = 2,
) -> BoundResult:
    """Aggregate bound 1 - sum I_ab / ((N-1)(d-1)) straight from chained values."""
    if n_parties < 2 or d < 2:
        raise DomainError(f"need N >= 2 and d >= 2, got N={n_parties}, d={d}")
    numbers = _pair_values(values, n_parties)
    if any(v < 0 for v in numbers):
        raise DomainError("chained values are non-negative")
    raw = 1.0 - sum(numbers) / ((n_parties - 1) * (d - 1))
    return BoundResult(
        n_parties=n_parties, raw=raw, clamped=min(1.0, max(0.0, raw)), source="chained_values"
    )


def gmnl_threshold(n_parties: int, d: int = 2, cap: int = CHAINED_N_CAP) -> ThresholdResult:
    """Smallest chained input count n whose quantum value beats 2(d - 1)/N.

    Raises:
        CapacityError: No n <= cap qualifies.
    """
    if n_parties < 2:
        raise DomainError(f"need N >= 2, got {n_parties}")
    target = 2 * (d - 1) / n_parties
    for n in range(2, cap + 1):
        result = quantum_chained_minimum(n, d)
        if result.value < target:
            return ThresholdResult(
                n_parties=n_parties,
                d=d,
                pair_requirement=float(Fraction(n_parties - 2, n_parties)),
                n_min=n,
                m=2 * n + 3,
                chained_value=result.value,
            )
    raise CapacityError("CHAINED_N_CAP", cap, n_parties)


def figure_data(
    which: str,
    n_range: tuple[int, int] | None = None,
    n_parties: int = FIG2_PARTIES,
    workers: int = 1,
) -> list[dict[str, Any]]:
    """Rows of the settings-per-party table (``fig1``) or the content table (``fig2``).

    fig1 rows: ``N, n_min, m`` for N in ``n_range`` (inclusive).
    fig2 rows: ``m, p_nl_lower`` for chained input counts n in ``n_range``.
    """
    if which == "fig1":
        low, high = n_range or FIG1_N_RANGE

        def fig1_row(n: int) -> dict[str, Any]:
            result = gmnl_threshold(n)
            return {"N": n, "n_min": result.n_min, "m": result.m}

        row_fn = fig1_row
    elif which == "fig2":
        low, high = n_range or FIG2_INPUT_RANGE
        pair_count = n_parties * (n_parties - 1) // 2

        def fig2_row(n: int) -> dict[str, Any]:
            pair = pair_bound_from_chained(quantum_chained_minimum(n).value, 2)
            bound = theorem2_bound([pair] * pair_count, n_parties)
            return {"m": 2 * n + 3, "p_nl_lower": bound.clamped}

        row_fn = fig2_row
    else:
        raise DomainError(f"unknown figure {which!r}; expected fig1 or fig2")
    if low > high:
        raise DomainError(f"empty range {low}..{high}")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row_fn, range(low, high + 1)))
    else:
        rows = [row_fn(n) for n in range(low, high + 1)]
    logger.info(f"Generated {len(rows)} rows for {which}")
    return rows


__all__ = [
    "Behavior",
    "born_behavior",
    "deterministic_behavior",
    "pr_box",
    "validate_behavior",
    "chained_value",
    "chained_analytic_minimum",
    "quantum_chained_minimum",
    "chained_grid_minimum",
    "local_deterministic_values",
    "pair_bound_from_chained",
    "theorem2_bound",
    "bound_from_chained_values",
    "gmnl_threshold",
    "figure_data",
]
