"""Single-qubit Clifford descriptors.

A Clifford U is described (up to global phase) by its conjugation images
``U X U^dag`` and ``U Z U^dag``, each a signed Pauli letter such as ``+Z`` or
``-Y``. The 24 descriptors are generated from words in H and S, which also
gives every descriptor a dense 2x2 unitary for the oracle checks.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DimensionError, DomainError
from .pauli import PauliOperator, multiply, parse_pauli

logger = logging.getLogger(__name__)

_PAULI_MATRICES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)


@dataclass(frozen=True)
class CliffordDescriptor:
    """Conjugation action of a single-qubit Clifford.

    Attributes:
        x_image: Signed letter equal to ``U X U^dag``.
        z_image: Signed letter equal to ``U Z U^dag``.
    """

    x_image: str
    z_image: str

    def __post_init__(self) -> None:
        for image in (self.x_image, self.z_image):
            if len(image) != 2 or image[0] not in "+-" or image[1] not in "XYZ":
                raise DomainError(f"invalid Clifford image {image!r}")
        if self.x_image[1] == self.z_image[1]:
            raise DomainError("images of X and Z must anticommute")

    @property
    def label(self) -> str:
        """H/S word realizing the descriptor, gates in application order."""
        return clifford_table()[self][0]

    @property
    def matrix(self) -> np.ndarray:
        return clifford_table()[self][1]

    def is_identity(self) -> bool:
        return self.x_image == "+X" and self.z_image == "+Z"

    def conjugate(self, op: PauliOperator) -> PauliOperator:
        """Single-site ``U op U^dag`` with exact phase."""
        if op.d != 2 or op.n_sites != 1:
            raise DimensionError("descriptor conjugation acts on single-qubit operators")
        result = PauliOperator.identity(1).with_phase(op.phase)
        if op.x[0]:
            result = multiply(result, _image_operator(self.x_image))
        if op.z[0]:
            result = multiply(result, _image_operator(self.z_image))
        return result

    def then(self, other: CliffordDescriptor) -> CliffordDescriptor:
        """Descriptor of ``other * self`` (apply self first)."""
        return CliffordDescriptor(
            _signed_letter(other.conjugate(_image_operator(self.x_image))),
            _signed_letter(other.conjugate(_image_operator(self.z_image))),
        )

    def to_dict(self) -> dict[str, str]:
        return {"x_image": self.x_image, "z_image": self.z_image, "label": self.label}

    def __str__(self) -> str:
        return f"X->{self.x_image},Z->{self.z_image}"


IDENTITY = CliffordDescriptor("+X", "+Z")
#: Pauli corrections: Z flips X, X flips Z, Y flips both
PAULI_Z = CliffordDescriptor("-X", "+Z")
PAULI_X = CliffordDescriptor("+X", "-Z")
PAULI_Y = CliffordDescriptor("-X", "-Z")
HADAMARD = CliffordDescriptor("+Z", "+X")


@lru_cache(maxsize=16)
def _image_operator(image: str) -> PauliOperator:
    return parse_pauli(image)


def _signed_letter(op: PauliOperator) -> str:
    if op.n_sites != 1 or op.is_identity():
        raise DomainError(f"{op} is not a single-qubit non-identity Pauli")
    return ("-" if op.hermitian_sign else "+") + op.letters


def _descriptor_of_matrix(unitary: np.ndarray) -> CliffordDescriptor:
    images = []
    for source in ("X", "Z"):
        conjugated = unitary @ _PAULI_MATRICES[source] @ unitary.conj().T
        for letter, pauli in _PAULI_MATRICES.items():
            if np.allclose(conjugated, pauli):
                images.append("+" + letter)
                break
            if np.allclose(conjugated, -pauli):
                images.append("-" + letter)
                break
        else:
            raise DomainError("matrix is not a Clifford unitary")
    return CliffordDescriptor(images[0], images[1])


@lru_cache(maxsize=1)
def clifford_table() -> dict[CliffordDescriptor, tuple[str, np.ndarray]]:
    """All 24 single-qubit Cliffords mod phase, by breadth-first search over H and S."""
    table: dict[CliffordDescriptor, tuple[str, np.ndarray]] = {}
    queue: deque[tuple[str, np.ndarray]] = deque([("", np.eye(2, dtype=complex))])
    while queue:
        word, unitary = queue.popleft()
        descriptor = _descriptor_of_matrix(unitary)
        if descriptor in table:
            continue
        table[descriptor] = (word or "I", unitary)
        for gate, matrix in (("H", _H), ("S", _S)):
            queue.append((word + gate, matrix @ unitary))
    logger.debug(f"Built single-qubit Clifford table with {len(table)} elements")
    return table


def find_clifford(a: str, b: str) -> CliffordDescriptor:
    """The Clifford with ``U a U^dag = +X`` and ``U b U^dag = +Z``.

    ``a`` and ``b`` are distinct letters from X, Y, Z.
    """
    if a == b or a not in "XYZ" or b not in "XYZ" or len(a) != 1 or len(b) != 1:
        raise DomainError(f"letters {a!r} and {b!r} must be distinct non-identity Paulis")
    op_a, op_b = parse_pauli(a), parse_pauli(b)
    for descriptor in clifford_table():
        if (
            _signed_letter(descriptor.conjugate(op_a)) == "+X"
            and _signed_letter(descriptor.conjugate(op_b)) == "+Z"
        ):
            return descriptor
    raise DomainError(f"no Clifford maps ({a}, {b}) to (X, Z)")


def conjugate_operator(
    descriptors: Sequence[CliffordDescriptor], op: PauliOperator
) -> PauliOperator:
    """Apply ``U_1 (x) ... (x) U_n`` by conjugation to an n-qubit operator."""
    if op.d != 2 or op.n_sites != len(descriptors):
        raise DimensionError(f"need {op.n_sites} descriptors for {op}")
    phase = op.phase
    x: list[int] = []
    z: list[int] = []
    for s, descriptor in enumerate(descriptors):
        local = PauliOperator(d=2, x=(op.x[s],), z=(op.z[s],), phase=0)
        image = descriptor.conjugate(local)
        phase += image.phase
        x.append(image.x[0])
        z.append(image.z[0])
    return PauliOperator(d=2, x=tuple(x), z=tuple(z), phase=phase)


def tensor_matrix(descriptors: Sequence[CliffordDescriptor]) -> np.ndarray:
    result = np.eye(1, dtype=complex)
    for descriptor in descriptors:
        result = np.kron(result, descriptor.matrix)
    return result


__all__ = [
    "CliffordDescriptor",
    "IDENTITY",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "HADAMARD",
    "clifford_table",
    "find_clifford",
    "conjugate_operator",
    "tensor_matrix",
]
