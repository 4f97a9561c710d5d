"""
Forced-outcome stabilizer tableau for single-site Pauli measurements.

The state is the maximally mixed state on the code space of the current
rows, so k <= N signed Hermitian rows are enough and no destabilizers are
kept. Every measurement either replaces an anticommuting row, reads a sign
from the row span, or appends a new row.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import (
    CertificateFailure,
    ContradictionError,
    DimensionError,
    DomainError,
)
from ..gf2 import EchelonBasis
from ..pauli import PauliOperator, commutation_phase, multiply, product, site_letter
from ..stabilizer import StabilizerGroup
from ..witness import MeasurementProtocol

logger = logging.getLogger(__name__)


@dataclass
class StabilizerTableau:
    """Signed commuting rows; each row is a Hermitian qubit PauliOperator."""

    n_qubits: int
    rows: list[PauliOperator] = field(default_factory=list)

    @classmethod
    def from_group(cls, g: StabilizerGroup) -> StabilizerTableau:
        return cls(g.n_qubits, list(g.generators))

    def copy(self) -> StabilizerTableau:
        return StabilizerTableau(self.n_qubits, list(self.rows))

    @property
    def signs(self) -> list[int]:
        return [row.hermitian_sign for row in self.rows]

    def texts(self) -> list[str]:
        return [row.to_text() for row in self.rows]

    def _basis(self) -> EchelonBasis:
        basis = EchelonBasis()
        for row in self.rows:
            basis.add(row.symplectic_bits())
        return basis

    def sign_of(self, op: PauliOperator) -> int | None:
        """Sign bit s with ``(-1)^s * letters(op)`` in the group, None when
        neither sign is."""
        if op.n_sites != self.n_qubits:
            raise DimensionError(f"{op} does not act on {self.n_qubits} qubits")
        combo = self._basis().decompose(op.symplectic_bits())
        if combo is None:
            return None
        chosen = (row for t, row in enumerate(self.rows) if (combo >> t) & 1)
        return product(chosen, self.n_qubits).hermitian_sign

    def expectation(self, op: PauliOperator) -> int:
        """+1 or -1 for group elements up to sign, 0 otherwise."""
        sign = self.sign_of(op)
        if sign is None:
            return 0
        return 1 - 2 * (sign ^ op.hermitian_sign)


def tableau_measure(
    t: StabilizerTableau,
    site: int,
    basis: str,
    forced_outcome: int | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[int, StabilizerTableau]:
    """Measure ``basis`` on ``site``; the input tableau is left unchanged.

    Outcome 0 is the +1 eigenvalue. Free outcomes use ``forced_outcome`` when
    given, otherwise a draw from ``rng``.

    Raises:
        ContradictionError: ``forced_outcome`` disagrees with a deterministic outcome.
    """
    if basis not in ("X", "Y", "Z"):
        raise DomainError(f"measurement basis must be X, Y or Z, got {basis!r}")
    if forced_outcome is not None and forced_outcome not in (0, 1):
        raise DomainError(f"forced outcome must be a bit, got {forced_outcome}")
    measured = PauliOperator.single_site(basis, site, t.n_qubits)
    rows = list(t.rows)

    def free_outcome() -> int:
        if forced_outcome is not None:
            return forced_outcome
        generator = rng if rng is not None else np.random.default_rng()
        return int(generator.integers(0, 2))

    anticommuting = [i for i, row in enumerate(rows) if commutation_phase(row, measured)]
    if anticommuting:
        outcome = free_outcome()
        first = anticommuting[0]
        for i in anticommuting[1:]:
            rows[i] = multiply(rows[i], rows[first])
        rows[first] = PauliOperator.single_site(basis, site, t.n_qubits, sign=outcome)
        return outcome, StabilizerTableau(t.n_qubits, rows)

    determined = t.sign_of(measured)
    if determined is not None:
        if forced_outcome is not None and forced_outcome != determined:
            raise ContradictionError(site, forced_outcome, determined)
        return determined, t.copy()

    outcome = free_outcome()
    rows.append(PauliOperator.single_site(basis, site, t.n_qubits, sign=outcome))
    return outcome, StabilizerTableau(t.n_qubits, rows)


def _embedded_pair(s: PauliOperator, pair: tuple[int, int]) -> PauliOperator:
    letters = ["I"] * s.n_sites
    for site in pair:
        letters[site - 1] = site_letter(s, site)
    return PauliOperator.from_letters("".join(letters))


def tableau_run_protocol(
    g: StabilizerGroup,
    p: MeasurementProtocol,
    outcomes: Mapping[int, int],
) -> tuple[PauliOperator, PauliOperator]:
    """Run a protocol with forced outcomes and read the signed pair stabilizers.

    Raises:
        ContradictionError: The outcome vector has probability zero.
    """
    if g.n_qubits != p.n_qubits:
        raise DimensionError(f"protocol acts on {p.n_qubits} qubits, group on {g.n_qubits}")
    if set(outcomes) != set(p.bases):
        raise DomainError(f"outcomes must cover exactly the sites {list(p.measured_sites)}")

    tableau = StabilizerTableau.from_group(g)
    for alpha in p.measured_sites:
        _, tableau = tableau_measure(
            tableau, alpha, p.bases[alpha], forced_outcome=outcomes[alpha]
        )

    extracted = []
    for s in (p.witness.s_i, p.witness.s_j):
        embedded = _embedded_pair(s, p.pair)
        sign = tableau.sign_of(embedded)
        if sign is None:
            raise CertificateFailure(
                f"{embedded} is not stabilized after the measurements",
                pair=p.pair,
                outcomes=dict(outcomes),
            )
        letters = site_letter(s, p.pair[0]) + site_letter(s, p.pair[1])
        extracted.append(PauliOperator.from_letters(letters, sign=sign))
    return extracted[0], extracted[1]


__all__ = ["StabilizerTableau", "tableau_measure", "tableau_run_protocol"]
