"""Small GF(2) linear algebra on int bitsets.

A vector of length n is an int whose bit j holds entry j. A matrix is a tuple
of such row ints, so equality to zero, row addition and dot products are
word operations.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .exceptions import DimensionError, SingularMatrix


def dot(a: int, b: int) -> int:
    """GF(2) inner product of two bit vectors."""
    return (a & b).bit_count() & 1


def bits_to_vector(bits: int, length: int) -> tuple[int, ...]:
    return tuple((bits >> j) & 1 for j in range(length))


def vector_to_bits(vector: Iterable[int]) -> int:
    value = 0
    for j, entry in enumerate(vector):
        if entry % 2:
            value |= 1 << j
    return value


@dataclass(frozen=True)
class BitMatrix:
    """Immutable n_rows x n_cols matrix over GF(2), one int per row."""

    n_rows: int
    n_cols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n_rows:
            raise DimensionError(f"expected {self.n_rows} rows, got {len(self.rows)}")
        mask = (1 << self.n_cols) - 1
        if any(row & ~mask for row in self.rows):
            raise DimensionError(f"row wider than {self.n_cols} columns")

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> BitMatrix:
        cols = n_rows if n_cols is None else n_cols
        return cls(n_rows, cols, (0,) * n_rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> BitMatrix:
        n_rows = len(entries)
        n_cols = len(entries[0]) if n_rows else 0
        if any(len(row) != n_cols for row in entries):
            raise DimensionError("ragged matrix rows")
        return cls(n_rows, n_cols, tuple(vector_to_bits(row) for row in entries))

    def to_lists(self) -> list[list[int]]:
        return [list(bits_to_vector(row, self.n_cols)) for row in self.rows]

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return (self.rows[i] >> j) & 1

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __xor__(self, other: BitMatrix) -> BitMatrix:
        self._check_same_shape(other)
        return BitMatrix(
            self.n_rows, self.n_cols, tuple(a ^ b for a, b in zip(self.rows, other.rows))
        )

    __add__ = __xor__

    def transpose(self) -> BitMatrix:
        cols = []
        for j in range(self.n_cols):
            value = 0
            for i, row in enumerate(self.rows):
                if (row >> j) & 1:
                    value |= 1 << i
            cols.append(value)
        return BitMatrix(self.n_cols, self.n_rows, tuple(cols))

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    def matvec(self, vector: int) -> int:
        """Return ``M v`` as a bit vector of length n_rows."""
        value = 0
        for i, row in enumerate(self.rows):
            if dot(row, vector):
                value |= 1 << i
        return value

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.n_cols != other.n_rows:
            raise DimensionError(
                f"cannot multiply {self.n_rows}x{self.n_cols} by {other.n_rows}x{other.n_cols}"
            )
        rows = []
        for row in self.rows:
            value = 0
            for j in range(self.n_cols):
                if (row >> j) & 1:
                    value ^= other.rows[j]
            rows.append(value)
        return BitMatrix(self.n_rows, other.n_cols, tuple(rows))

    def column(self, j: int) -> int:
        return vector_to_bits((row >> j) & 1 for row in self.rows)

    def is_symmetric(self) -> bool:
        return self.n_rows == self.n_cols and self == self.transpose()

    def has_zero_diagonal(self) -> bool:
        return all(not (row >> i) & 1 for i, row in enumerate(self.rows))

    def rank(self) -> int:
        return rank(self.rows)

    def inverse(self) -> BitMatrix:
        """Gauss-Jordan inverse; raises SingularMatrix when not invertible."""
        if self.n_rows != self.n_cols:
            raise SingularMatrix(f"{self.n_rows}x{self.n_cols} matrix is not square")
        n = self.n_rows
        work = list(self.rows)
        inv = [1 << i for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if (work[r] >> col) & 1), None)
            if pivot is None:
                raise SingularMatrix("matrix is singular over GF(2)")
            work[col], work[pivot] = work[pivot], work[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
            for r in range(n):
                if r != col and (work[r] >> col) & 1:
                    work[r] ^= work[col]
                    inv[r] ^= inv[col]
        return BitMatrix(n, n, tuple(inv))

    def _check_same_shape(self, other: BitMatrix) -> None:
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            raise DimensionError(
                f"shape mismatch: {self.n_rows}x{self.n_cols} vs {other.n_rows}x{other.n_cols}"
            )


def rank(rows: Iterable[int]) -> int:
    """Rank of a set of bit vectors."""
    basis = EchelonBasis()
    return sum(1 for row in rows if basis.add(row))


def in_span(vector: int, rows: Iterable[int]) -> bool:
    basis = EchelonBasis()
    for row in rows:
        basis.add(row)
    return basis.contains(vector)


@dataclass
class EchelonBasis:
    """Incrementally built echelon basis that remembers how each row was formed.

    Every stored row carries a combination mask over the vectors passed to
    :meth:`add` (bit t set when the t-th added vector contributes), so
    :meth:`decompose` returns which inputs sum to a target.
    """

    pivots: list[int] = field(default_factory=list)
    rows: list[int] = field(default_factory=list)
    combos: list[int] = field(default_factory=list)
    added: int = 0

    def reduce(self, vector: int) -> tuple[int, int]:
        """Return ``(residual, combination)`` after eliminating known pivots."""
        combo = 0
        for pivot, row, row_combo in zip(self.pivots, self.rows, self.combos):
            if (vector >> pivot) & 1:
                vector ^= row
                combo ^= row_combo
        return vector, combo

    def add(self, vector: int) -> bool:
        """Insert a vector; return False when it was already in the span."""
        index = self.added
        self.added += 1
        residual, combo = self.reduce(vector)
        if residual == 0:
            return False
        pivot = residual.bit_length() - 1
        combo ^= 1 << index
        for t, row in enumerate(self.rows):
            if (row >> pivot) & 1:
                self.rows[t] ^= residual
                self.combos[t] ^= combo
        self.pivots.append(pivot)
        self.rows.append(residual)
        self.combos.append(combo)
        return True

    def contains(self, vector: int) -> bool:
        return self.reduce(vector)[0] == 0

    def decompose(self, vector: int) -> int | None:
        """Mask of added vectors summing to ``vector``, or None outside the span."""
        residual, combo = self.reduce(vector)
        return combo if residual == 0 else None

    @property
    def dimension(self) -> int:
        return len(self.rows)


def solve(rows: Sequence[int], rhs: Sequence[int], n_cols: int) -> int | None:
    """Solve ``rows[t] . u = rhs[t]`` for all t; free variables are set to 0.

    Returns the solution as a bit vector of length n_cols, or None when the
    system is inconsistent.
    """
    if len(rows) != len(rhs):
        raise DimensionError("one right-hand side per equation is required")
    flag = 1 << n_cols
    work = [row | (flag if b % 2 else 0) for row, b in zip(rows, rhs)]
    pivot_cols: list[int] = []
    r = 0
    for col in range(n_cols):
        pivot = next((t for t in range(r, len(work)) if (work[t] >> col) & 1), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for t in range(len(work)):
            if t != r and (work[t] >> col) & 1:
                work[t] ^= work[r]
        pivot_cols.append(col)
        r += 1
    if any(row == flag for row in work[r:]):
        return None
    solution = 0
    for t, col in enumerate(pivot_cols):
        if work[t] & flag:
            solution |= 1 << col
    return solution


def nullspace(rows: Sequence[int], n_cols: int) -> list[int]:
    """Basis of ``{u : rows[t] . u = 0 for all t}``."""
    work = list(rows)
    pivot_cols: list[int] = []
    r = 0
    for col in range(n_cols):
        pivot = next((t for t in range(r, len(work)) if (work[t] >> col) & 1), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for t in range(len(work)):
            if t != r and (work[t] >> col) & 1:
                work[t] ^= work[r]
        pivot_cols.append(col)
        r += 1
    free_cols = [c for c in range(n_cols) if c not in pivot_cols]
    basis = []
    for free in free_cols:
        vector = 1 << free
        for t, col in enumerate(pivot_cols):
            if (work[t] >> free) & 1:
                vector |= 1 << col
        basis.append(vector)
    return basis


__all__ = [
    "BitMatrix",
    "EchelonBasis",
    "dot",
    "bits_to_vector",
    "vector_to_bits",
    "rank",
    "in_span",
    "solve",
    "nullspace",
]
