"""
Qubit stabilizer groups, commutation matrices and the GME decision.

A group is stored by an ordered list of independent commuting Hermitian
generators. Site-alpha commutation matrices C^alpha record which generator
pairs anticommute on site alpha; a subspace is GME exactly when every
bipartition Q|Q-bar (party 1 in Q) has a nonzero partial sum of C^alpha over Q.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constants import ENUMERATION_MAX_K
from .data_models import GMEVerdict, ValidationResult
from .exceptions import (
    CapacityError,
    DimensionError,
    DomainError,
    InvalidPhase,
    MinusIdentity,
    NotAbelian,
)
from .gf2 import BitMatrix, EchelonBasis, nullspace
from .pauli import PauliOperator, commutation_phase, multiply, parse_pauli, product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilizerGroup:
    """Generators of a stabilizer group; build through :func:`validate_and_canonicalize`.

    Attributes:
        n_qubits: Number of parties N.
        generators: Independent commuting Hermitian generators g_1..g_k.
        canonical_flag: True when the generators are in reduced echelon form.
        dropped: 1-based input positions removed as dependent.
    """

    n_qubits: int
    generators: tuple[PauliOperator, ...]
    canonical_flag: bool = False
    dropped: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.generators:
            raise DomainError("a stabilizer group needs at least one generator")
        for op in self.generators:
            if op.d != 2:
                raise DomainError("stabilizer groups are qubit groups (d=2)")
            if op.n_sites != self.n_qubits:
                raise DimensionError(
                    f"generator {op} has {op.n_sites} sites, expected {self.n_qubits}"
                )

    @property
    def k(self) -> int:
        return len(self.generators)

    def texts(self) -> list[str]:
        return [op.to_text() for op in self.generators]

    def element(self, mask: int) -> PauliOperator:
        """Product of the generators selected by the bits of ``mask`` (bit m -> g_{m+1})."""
        chosen = (g for m, g in enumerate(self.generators) if (mask >> m) & 1)
        return product(chosen, self.n_qubits)

    @classmethod
    def from_texts(cls, texts: Iterable[str], echelon: bool = False) -> StabilizerGroup:
        return validate_and_canonicalize([parse_pauli(t) for t in texts], echelon=echelon)


@dataclass(frozen=True)
class CommutationMatrixSet:
    """Per-party k x k commutation matrices C^1..C^N."""

    n_qubits: int
    k: int
    matrices: tuple[BitMatrix, ...]

    def __getitem__(self, alpha: int) -> BitMatrix:
        if not 1 <= alpha <= self.n_qubits:
            raise DomainError(f"party {alpha} outside [1, {self.n_qubits}]")
        return self.matrices[alpha - 1]

    def partial_sum(self, parties: Iterable[int]) -> BitMatrix:
        """Sum of C^alpha over ``parties``: the commutation matrix of restrictions to Q."""
        total = BitMatrix.zeros(self.k)
        for alpha in set(parties):
            total = total ^ self[alpha]
        return total

    def fact1_holds(self) -> bool:
        return self.partial_sum(range(1, self.n_qubits + 1)).is_zero()


@dataclass(frozen=True)
class BasisChange:
    """Invertible k x k GF(2) matrix A; new generator j is prod_m g_m^{A[m, j]}."""

    matrix: BitMatrix

    def __post_init__(self) -> None:
        self.matrix.inverse()

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> BasisChange:
        return cls(BitMatrix.from_lists(entries))

    @property
    def k(self) -> int:
        return self.matrix.n_rows


# =============================================================================
# Validation
# =============================================================================


def validate_and_canonicalize(
    generators: Sequence[PauliOperator], echelon: bool = False
) -> StabilizerGroup:
    """Check a generating list and drop dependent generators.

    Generators are eliminated in input order against the symplectic span of
    the ones kept so far; a dependent generator equal to the matching product
    is dropped (and reported), one equal to minus that product exposes -I.

    Args:
        generators: Candidate generators, all on the same number of qubits.
        echelon: Return the reduced echelon generating set instead of the
            caller's independent generators.

    Raises:
        InvalidPhase: A generator is not Hermitian.
        NotAbelian: Two generators anticommute.
        MinusIdentity: -I is a product of generators.
    """
    ops = list(generators)
    if not ops:
        raise DomainError("no generators given")
    n = ops[0].n_sites
    for op in ops:
        if op.d != 2:
            raise DomainError(f"stabilizer groups need d=2, got d={op.d}")
        if op.n_sites != n:
            raise DimensionError(f"mixed site counts: {n} and {op.n_sites}")

    for i, op in enumerate(ops, start=1):
        if not op.is_hermitian():
            raise InvalidPhase(i)
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if commutation_phase(ops[i], ops[j]):
                raise NotAbelian(i + 1, j + 1)

    basis = EchelonBasis()
    kept: list[int] = []
    dropped: list[int] = []
    for index, op in enumerate(ops):
        combo = basis.decompose(op.symplectic_bits())
        if combo is None:
            basis.add(op.symplectic_bits())
            kept.append(index)
            continue
        members = [kept[t] for t in range(len(kept)) if (combo >> t) & 1]
        same = product((ops[m] for m in members), n)
        if same.phase != op.phase:
            raise MinusIdentity([m + 1 for m in members] + [index + 1])
        dropped.append(index + 1)

    if not kept:
        raise DomainError("all generators are the identity")
    if dropped:
        logger.info(f"Dropped dependent generators at positions {dropped}")
        warnings.warn(
            f"dependent generators removed at positions {dropped}",
            UserWarning,
            stacklevel=2,
        )

    if echelon:
        order = sorted(range(len(basis.rows)), key=lambda t: -basis.pivots[t])
        reduced = tuple(
            product(
                (ops[kept[t]] for t in range(len(kept)) if (basis.combos[r] >> t) & 1), n
            )
            for r in order
        )
        return StabilizerGroup(n, reduced, canonical_flag=True, dropped=tuple(dropped))

    return StabilizerGroup(
        n, tuple(ops[i] for i in kept), canonical_flag=False, dropped=tuple(dropped)
    )


def subspace_dimension(g: StabilizerGroup) -> int:
    """Dimension 2^(N - k) of the stabilized subspace."""
    return 2 ** (g.n_qubits - g.k)


def enumerate_group(g: StabilizerGroup) -> list[PauliOperator]:
    """All 2^k elements; entry ``mask`` is the product selected by the bits of mask."""
    if g.k > ENUMERATION_MAX_K:
        raise CapacityError("ENUMERATION_MAX_K", ENUMERATION_MAX_K, g.k)
    elements = [PauliOperator.identity(g.n_qubits)]
    for mask in range(1, 1 << g.k):
        low = mask & -mask
        elements.append(multiply(elements[mask ^ low], g.generators[low.bit_length() - 1]))
    return elements


# =============================================================================
# Commutation matrices
# =============================================================================


def commutation_matrices(g: StabilizerGroup) -> CommutationMatrixSet:
    """(C^alpha)_{ij} = 1 when g_i and g_j anticommute on site alpha."""
    matrices = []
    for s in range(g.n_qubits):
        xs = [op.x[s] for op in g.generators]
        zs = [op.z[s] for op in g.generators]
        rows = []
        for i in range(g.k):
            row = 0
            for j in range(g.k):
                if (xs[i] * zs[j] + zs[i] * xs[j]) % 2:
                    row |= 1 << j
            rows.append(row)
        matrices.append(BitMatrix(g.k, g.k, tuple(rows)))
    return CommutationMatrixSet(g.n_qubits, g.k, tuple(matrices))


def _pack(matrix: BitMatrix) -> int:
    packed = 0
    for i, row in enumerate(matrix.rows):
        packed |= row << (i * matrix.n_cols)
    return packed


def bipartition_count(n_parties: int) -> int:
    return 2 ** (n_parties - 1) - 1


def _gray(t: int) -> int:
    return t ^ (t >> 1)


def _mask_to_parties(mask: int, n_parties: int) -> tuple[int, ...]:
    return (1,) + tuple(b + 2 for b in range(n_parties - 1) if (mask >> b) & 1)


def _inverse_gray(mask: int) -> int:
    t = mask
    shift = mask >> 1
    while shift:
        t ^= shift
        shift >>= 1
    return t


def _checked_through(t: int, n_parties: int) -> int:
    """Bipartitions visited up to and including Gray index t."""
    full_index = _inverse_gray((1 << (n_parties - 1)) - 1)
    return t + 1 - (1 if full_index <= t else 0)


def _scan_gray_range(
    packed: Sequence[int], n_parties: int, start: int, stop: int
) -> tuple[int | None, int]:
    """First Gray index in [start, stop) whose partial sum vanishes, and the count checked."""
    full = (1 << (n_parties - 1)) - 1
    mask = _gray(start)
    running = packed[0]
    for b in range(n_parties - 1):
        if (mask >> b) & 1:
            running ^= packed[b + 1]
    checked = 0
    for t in range(start, stop):
        if t > start:
            b = (t & -t).bit_length() - 1
            running ^= packed[b + 1]
            mask ^= 1 << b
        if mask == full:
            continue
        checked += 1
        if running == 0:
            return t, checked
    return None, checked


def is_gme(g: StabilizerGroup, workers: int = 1) -> GMEVerdict:
    """Decide GME by scanning every bipartition with party 1 in Q.

    Bipartitions are visited in Gray-code order, so each step XORs a single
    commutation matrix into the running partial sum. With ``workers > 1`` the
    Gray range is split into contiguous chunks; the earliest violation wins,
    so the verdict does not depend on the worker count.

    Returns:
        GMEVerdict; ``violating_bipartition`` holds the first Q (sorted parties)
        whose restricted generators all commute.
    """
    n = g.n_qubits
    if n < 2:
        raise DomainError("GME needs at least two parties")
    matrices = commutation_matrices(g)
    packed = [_pack(m) for m in matrices.matrices]
    total = 1 << (n - 1)

    if workers <= 1:
        found, checked = _scan_gray_range(packed, n, 0, total)
    else:
        step = math.ceil(total / workers)
        bounds = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda b: _scan_gray_range(packed, n, b[0], b[1]), bounds)
            )
        hits = [t for t, _ in results if t is not None]
        found = min(hits) if hits else None
        checked = sum(c for _, c in results)
    if found is not None:
        checked = _checked_through(found, n)

    if found is None:
        logger.debug(f"GME: all {checked} bipartitions have nonzero partial sums")
        return GMEVerdict(is_gme=True, n_parties=n, bipartitions_checked=checked)
    violating = _mask_to_parties(_gray(found), n)
    logger.debug(f"Not GME: Q={list(violating)} after {checked} bipartitions")
    return GMEVerdict(
        is_gme=False,
        n_parties=n,
        bipartitions_checked=checked,
        violating_bipartition=violating,
    )


def max_gme_dimension(n_parties: int) -> int:
    """Largest GME stabilizer-subspace dimension 2^(N - k(N)), k(N) = ceil((1 + sqrt(8N-7))/2)."""
    if n_parties < 4:
        raise DomainError("GME stabilizer subspaces of dimension >= 2 need N >= 4")
    target = 8 * n_parties - 7
    k = 1
    # smallest k with 2k - 1 >= sqrt(8N - 7), in exact integers
    while (2 * k - 1) ** 2 < target:
        k += 1
    return 2 ** (n_parties - k)


# =============================================================================
# Basis changes and random groups
# =============================================================================


def apply_basis_change(g: StabilizerGroup, change: BasisChange | BitMatrix) -> StabilizerGroup:
    """New generators g~_j = prod_m g_m^{A[m, j]} with exact phases."""
    matrix = change.matrix if isinstance(change, BasisChange) else change
    if matrix.n_rows != g.k or matrix.n_cols != g.k:
        raise DimensionError(f"basis change must be {g.k}x{g.k}")
    matrix.inverse()
    columns = [matrix.column(j) for j in range(g.k)]
    return StabilizerGroup(g.n_qubits, tuple(g.element(col) for col in columns))


def _symplectic_swap(bits: int, n: int) -> int:
    low = bits & ((1 << n) - 1)
    return (bits >> n) | (low << n)


def _operator_from_bits(bits: int, n: int, sign: int) -> PauliOperator:
    x = tuple((bits >> s) & 1 for s in range(n))
    z = tuple((bits >> (n + s)) & 1 for s in range(n))
    y_count = sum(a & b for a, b in zip(x, z))
    return PauliOperator(d=2, x=x, z=z, phase=y_count + 2 * sign)


def random_stabilizer_group(
    n_qubits: int, k: int, rng: np.random.Generator | int | None = None
) -> StabilizerGroup:
    """Random valid group: each new generator is drawn from the symplectic
    complement of the ones already chosen, outside their span, with a random sign.
    """
    if not 1 <= k <= n_qubits:
        raise DomainError(f"need 1 <= k <= N, got k={k}, N={n_qubits}")
    rng = np.random.default_rng(rng)
    chosen: list[int] = []
    basis = EchelonBasis()
    while len(chosen) < k:
        constraints = [_symplectic_swap(w, n_qubits) for w in chosen]
        null = nullspace(constraints, 2 * n_qubits)
        coefficients = rng.integers(0, 2, size=len(null))
        vector = 0
        for c, v in zip(coefficients, null):
            if c:
                vector ^= v
        if vector == 0 or basis.contains(vector):
            continue
        basis.add(vector)
        chosen.append(vector)
    signs = rng.integers(0, 2, size=k)
    ops = tuple(_operator_from_bits(v, n_qubits, int(s)) for v, s in zip(chosen, signs))
    return StabilizerGroup(n_qubits, ops)


# =============================================================================
# Report-style validation
# =============================================================================


class GroupValidator:
    """Collects every problem of a generating list instead of stopping at the first."""

    @classmethod
    def validate_shapes(cls, ops: Sequence[PauliOperator]) -> list[str]:
        if not ops:
            return ["no generators given"]
        errors = []
        n = ops[0].n_sites
        for i, op in enumerate(ops, start=1):
            if op.d != 2:
                errors.append(f"generator {i} is not a qubit operator (d={op.d})")
            elif op.n_sites != n:
                errors.append(f"generator {i} has {op.n_sites} sites, expected {n}")
        return errors

    @classmethod
    def validate_hermitian(cls, ops: Sequence[PauliOperator]) -> list[str]:
        return [
            f"generator {i} ({op}) is not Hermitian"
            for i, op in enumerate(ops, start=1)
            if not op.is_hermitian()
        ]

    @classmethod
    def validate_commutation(cls, ops: Sequence[PauliOperator]) -> list[str]:
        errors = []
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                if commutation_phase(ops[i], ops[j]):
                    errors.append(f"generators {i + 1} and {j + 1} do not commute")
        return errors

    @classmethod
    def validate(cls, ops: Sequence[PauliOperator]) -> ValidationResult:
        errors = cls.validate_shapes(ops)
        if errors:
            return ValidationResult.failure(errors)
        errors = cls.validate_hermitian(ops) + cls.validate_commutation(ops)
        if errors:
            return ValidationResult.failure(errors)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                group = validate_and_canonicalize(ops)
        except (MinusIdentity, DomainError) as exc:
            return ValidationResult.failure([str(exc)])

        notes = [f"generator {i} is dependent and was removed" for i in group.dropped]
        result = ValidationResult.success(notes)
        result.details = {
            "n_qubits": group.n_qubits,
            "k": group.k,
            "subspace_dimension": subspace_dimension(group),
            "generators": group.texts(),
            "dropped": list(group.dropped),
        }
        return result


__all__ = [
    "StabilizerGroup",
    "CommutationMatrixSet",
    "BasisChange",
    "validate_and_canonicalize",
    "subspace_dimension",
    "enumerate_group",
    "commutation_matrices",
    "bipartition_count",
    "is_gme",
    "max_gme_dimension",
    "apply_basis_change",
    "random_stabilizer_group",
    "GroupValidator",
]
