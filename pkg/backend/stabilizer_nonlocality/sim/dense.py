"""
Dense oracle for measurement protocols.

States are numpy arrays over the computational basis with site 1 as the most
significant digit. Used to check the tableau engine and to compute
fidelities; capped at DENSE_MATRIX_MAX_QUBITS for density matrices and
DENSE_VECTOR_MAX_QUBITS for pure states.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from ..clifford import tensor_matrix
from ..constants import (
    DENSE_MATRIX_MAX_QUBITS,
    DENSE_VECTOR_MAX_QUBITS,
    HERMITIAN_TOL,
    ZERO_PROBABILITY_TOL,
)
from ..exceptions import CapacityError, DimensionError, DomainError, ZeroProbability
from ..pauli import PauliOperator
from ..stabilizer import StabilizerGroup
from ..witness import CorrectionRule, MeasurementProtocol

logger = logging.getLogger(__name__)

_SQRT_HALF = 1.0 / np.sqrt(2.0)

#: +1 and -1 eigenvectors of each measurement basis
_EIGENVECTORS: dict[str, tuple[np.ndarray, np.ndarray]] = {
    "Z": (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
    "X": (
        np.array([_SQRT_HALF, _SQRT_HALF], dtype=complex),
        np.array([_SQRT_HALF, -_SQRT_HALF], dtype=complex),
    ),
    "Y": (
        np.array([_SQRT_HALF, 1j * _SQRT_HALF], dtype=complex),
        np.array([_SQRT_HALF, -1j * _SQRT_HALF], dtype=complex),
    ),
}

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) * _SQRT_HALF


@dataclass
class DenseState:
    """Pure (``vector``) or mixed (``matrix``) qubit state; exactly one is set."""

    n_qubits: int
    vector: np.ndarray | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self) -> None:
        if (self.vector is None) == (self.matrix is None):
            raise DomainError("a dense state needs exactly one of vector or matrix")
        dim = 2**self.n_qubits
        data = self.vector if self.vector is not None else self.matrix
        assert data is not None
        if data.shape[0] != dim:
            raise DimensionError(f"state of dimension {data.shape[0]}, expected {dim}")

    @property
    def dimension(self) -> int:
        return 2**self.n_qubits

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def density_matrix(self) -> np.ndarray:
        if self.vector is not None:
            return np.outer(self.vector, self.vector.conj())
        assert self.matrix is not None
        return self.matrix

    def trace(self) -> float:
        if self.vector is not None:
            return float(np.vdot(self.vector, self.vector).real)
        assert self.matrix is not None
        return float(np.trace(self.matrix).real)

    def is_valid(self, tol: float = HERMITIAN_TOL) -> bool:
        """Unit trace and, for matrices, Hermitian within ``tol``."""
        if abs(self.trace() - 1.0) > tol:
            return False
        if self.matrix is not None:
            return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=tol))
        return True

    def expectation(self, op: PauliOperator) -> complex:
        """Tr(rho op)."""
        if op.n_sites != self.n_qubits or op.d != 2:
            raise DimensionError(f"{op} does not act on {self.n_qubits} qubits")
        if self.vector is not None:
            return complex(np.vdot(self.vector, op.apply(self.vector)))
        assert self.matrix is not None
        return complex(np.trace(op.apply(self.matrix)))

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.linalg.matrix_rank(self.density_matrix(), tol=tol))


def _check_cap(n_qubits: int, cap: int, name: str) -> None:
    if n_qubits > cap:
        raise CapacityError(name, cap, n_qubits)


def dense_projector(g: StabilizerGroup) -> DenseState:
    """Maximally mixed state on the code space, prod_m (1 + g_m)/2 over its trace."""
    _check_cap(g.n_qubits, DENSE_MATRIX_MAX_QUBITS, "DENSE_MATRIX_MAX_QUBITS")
    projector = np.eye(2**g.n_qubits, dtype=complex)
    for generator in g.generators:
        projector = 0.5 * (projector + generator.apply(projector))
    trace = np.trace(projector).real
    logger.debug(f"Code space projector of rank {round(trace)} on {g.n_qubits} qubits")
    return DenseState(g.n_qubits, matrix=projector / trace)


def dense_pure_code_state(
    g: StabilizerGroup, rng: np.random.Generator | int | None = None
) -> DenseState:
    """Random pure state in the code space (projected complex Gaussian vector)."""
    _check_cap(g.n_qubits, DENSE_VECTOR_MAX_QUBITS, "DENSE_VECTOR_MAX_QUBITS")
    rng = np.random.default_rng(rng)
    dim = 2**g.n_qubits
    while True:
        vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        for generator in g.generators:
            vector = 0.5 * (vector + generator.apply(vector))
        norm = np.linalg.norm(vector)
        if norm > 1e-6:
            return DenseState(g.n_qubits, vector=vector / norm)


def basis_eigenvector(basis: str, outcome: int) -> np.ndarray:
    """Eigenvector of ``basis`` for outcome 0 (+1) or 1 (-1)."""
    if basis not in _EIGENVECTORS or outcome not in (0, 1):
        raise DomainError(f"no eigenvector for basis {basis!r}, outcome {outcome}")
    return _EIGENVECTORS[basis][outcome]


def dense_run_protocol(
    state: DenseState,
    p: MeasurementProtocol,
    outcomes: Mapping[int, int],
) -> tuple[DenseState, float]:
    """Project the measured sites onto the outcome eigenvectors and trace them out.

    Returns:
        The normalized two-qubit state on (a1, a2) and the outcome probability.

    Raises:
        ZeroProbability: The outcome vector has probability below ZERO_PROBABILITY_TOL.
    """
    n = state.n_qubits
    if n != p.n_qubits:
        raise DimensionError(f"protocol acts on {p.n_qubits} qubits, state on {n}")
    if set(outcomes) != set(p.bases):
        raise DomainError(f"outcomes must cover exactly the sites {list(p.measured_sites)}")

    remaining = n
    if state.vector is not None:
        psi = state.vector.reshape((2,) * n)
        for alpha in sorted(p.bases, reverse=True):
            bra = basis_eigenvector(p.bases[alpha], outcomes[alpha]).conj()
            psi = np.tensordot(bra, psi, axes=([0], [alpha - 1]))
        vector = psi.reshape(4)
        probability = float(np.vdot(vector, vector).real)
        if probability < ZERO_PROBABILITY_TOL:
            raise ZeroProbability(dict(outcomes), probability)
        return DenseState(2, vector=vector / np.sqrt(probability)), probability

    assert state.matrix is not None
    rho = state.matrix.reshape((2,) * (2 * n))
    for alpha in sorted(p.bases, reverse=True):
        ket = basis_eigenvector(p.bases[alpha], outcomes[alpha])
        rho = np.tensordot(ket.conj(), rho, axes=([0], [alpha - 1]))
        rho = np.tensordot(rho, ket, axes=([remaining - 1 + alpha - 1], [0]))
        remaining -= 1
    matrix = rho.reshape(4, 4)
    probability = float(np.trace(matrix).real)
    if probability < ZERO_PROBABILITY_TOL:
        raise ZeroProbability(dict(outcomes), probability)
    return DenseState(2, matrix=matrix / probability), probability


def corrected_fidelity(state: DenseState, rule: CorrectionRule | None = None) -> float:
    """Fidelity <phi+|U rho U^dag|phi+> of a two-qubit state after ``rule``."""
    if state.n_qubits != 2:
        raise DimensionError("fidelity with phi+ needs a two-qubit state")
    unitary = (
        tensor_matrix([rule.u_first, rule.u_second])
        if rule is not None
        else np.eye(4, dtype=complex)
    )
    if state.vector is not None:
        return float(abs(np.vdot(PHI_PLUS, unitary @ state.vector)) ** 2)
    rotated = unitary @ state.density_matrix() @ unitary.conj().T
    return float(np.vdot(PHI_PLUS, rotated @ PHI_PLUS).real)


__all__ = [
    "DenseState",
    "PHI_PLUS",
    "dense_projector",
    "dense_pure_code_state",
    "basis_eigenvector",
    "dense_run_protocol",
    "corrected_fidelity",
]
