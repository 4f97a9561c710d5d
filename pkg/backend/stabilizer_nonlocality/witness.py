"""
Witness pairs and measurement protocols.

For a GME stabilizer group and a pair of parties (a1, a2) there are two group
elements s_i, s_j that anticommute on sites a1 and a2 and commute on every
other site. Measuring every other party in a common eigenbasis of the two
site letters leaves a1, a2 in a two-qubit state stabilized by signed
restrictions of s_i and s_j, which local Cliffords turn into |phi+>.

Functions:
    - find_witness / find_all_witnesses: deterministic witness search
    - witness_from_vectors: build and check a caller-chosen witness
    - synthesize_protocol: measurement bases and sign tables
    - post_measurement_stabilizers: signed pair for an outcome vector
    - corrective_unitaries: local Cliffords mapping the pair to (+XX, +ZZ)
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

from .clifford import (
    IDENTITY,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    CliffordDescriptor,
    conjugate_operator,
    find_clifford,
)
from .data_models import ProtocolDict, WitnessDict
from .exceptions import DomainError, InvalidWitness, NotGME, NoTwoSiteWitness
from .gf2 import EchelonBasis, bits_to_vector, solve, vector_to_bits
from .pauli import (
    PauliOperator,
    check_site,
    site_commutation_phases,
    site_letter,
)
from .stabilizer import (
    CommutationMatrixSet,
    StabilizerGroup,
    commutation_matrices,
    enumerate_group,
    is_gme,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WitnessPair:
    """Two group elements anticommuting exactly on the sites of ``pair``.

    ``u`` and ``v`` select generators: ``s_i = prod_m g_m^{u_m}``.
    """

    pair: tuple[int, int]
    u: tuple[int, ...]
    v: tuple[int, ...]
    s_i: PauliOperator
    s_j: PauliOperator

    def to_dict(self) -> WitnessDict:
        return {
            "pair": list(self.pair),
            "u": list(self.u),
            "v": list(self.v),
            "s_i": self.s_i.to_text(),
            "s_j": self.s_j.to_text(),
        }


@dataclass(frozen=True)
class MeasurementProtocol:
    """Bases for the measured parties and the sign tables of s_i and s_j.

    ``tau_i[alpha][a]`` is the sign exponent s_i picks up on site alpha when
    the outcome there is ``a`` (0 for the +1 eigenvector, 1 for the -1 one).
    """

    pair: tuple[int, int]
    bases: Mapping[int, str]
    tau_i: Mapping[int, tuple[int, int]]
    tau_j: Mapping[int, tuple[int, int]]
    witness: WitnessPair

    @property
    def n_qubits(self) -> int:
        return self.witness.s_i.n_sites

    @property
    def measured_sites(self) -> tuple[int, ...]:
        return tuple(sorted(self.bases))

    @property
    def branch_count(self) -> int:
        return 2 ** len(self.bases)

    def outcome_vectors(self) -> Iterator[dict[int, int]]:
        """Every outcome assignment, in lexicographic order over the measured sites."""
        sites = self.measured_sites
        for bits in itertools.product((0, 1), repeat=len(sites)):
            yield dict(zip(sites, bits))

    def to_dict(self) -> ProtocolDict:
        return {
            "pair": list(self.pair),
            "bases": {str(a): self.bases[a] for a in self.measured_sites},
            "tau_i": {str(a): list(self.tau_i[a]) for a in self.measured_sites},
            "tau_j": {str(a): list(self.tau_j[a]) for a in self.measured_sites},
        }


@dataclass(frozen=True)
class CorrectionRule:
    """Local Cliffords on (a1, a2) taking (s~_i, s~_j) to (+XX, +ZZ).

    ``residual`` is the Pauli appended on a1 to fix leftover signs.
    """

    s_tilde_i: PauliOperator
    s_tilde_j: PauliOperator
    u_first: CliffordDescriptor
    u_second: CliffordDescriptor
    residual: str = "I"

    @property
    def bell_class(self) -> str:
        """Pre-correction stabilizer pair, the local-unitary class of the state."""
        return f"{self.s_tilde_i.to_text()},{self.s_tilde_j.to_text()}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "s_tilde_i": self.s_tilde_i.to_text(),
            "s_tilde_j": self.s_tilde_j.to_text(),
            "u_first": self.u_first.to_dict(),
            "u_second": self.u_second.to_dict(),
            "residual": self.residual,
        }


# =============================================================================
# Witness search
# =============================================================================


def witness_problems(
    s_i: PauliOperator, s_j: PauliOperator, pair: tuple[int, int]
) -> list[str]:
    """Sites where the two-site anticommutation pattern is violated."""
    problems = []
    for site, phase in enumerate(site_commutation_phases(s_i, s_j), start=1):
        expected = 1 if site in pair else 0
        if phase != expected:
            state = "commute" if phase == 0 else "anticommute"
            problems.append(f"site {site}: letters {state}")
    return problems


def _check_pair(g: StabilizerGroup, alpha1: int, alpha2: int) -> tuple[int, int]:
    check_site(alpha1, g.n_qubits)
    check_site(alpha2, g.n_qubits)
    if alpha1 == alpha2:
        raise DomainError(f"witness pair needs two distinct parties, got ({alpha1}, {alpha2})")
    return (min(alpha1, alpha2), max(alpha1, alpha2))


def _lex_vector(t: int, k: int) -> int:
    """t-th vector in lexicographic order with v_1 most significant, as bits (bit m -> v_{m+1})."""
    return sum(((t >> (k - 1 - m)) & 1) << m for m in range(k))


def witness_from_vectors(
    g: StabilizerGroup,
    alpha1: int,
    alpha2: int,
    u: Sequence[int],
    v: Sequence[int],
) -> WitnessPair:
    """Build the witness selected by ``u`` and ``v`` and check its pattern.

    Raises:
        InvalidWitness: The products do not anticommute exactly on the pair.
    """
    pair = _check_pair(g, alpha1, alpha2)
    if len(u) != g.k or len(v) != g.k:
        raise DomainError(f"u and v need {g.k} entries")
    u_bits, v_bits = vector_to_bits(u), vector_to_bits(v)
    if u_bits == 0 or v_bits == 0 or u_bits == v_bits:
        raise InvalidWitness("u and v must be nonzero and distinct")
    witness = WitnessPair(
        pair=pair,
        u=bits_to_vector(u_bits, g.k),
        v=bits_to_vector(v_bits, g.k),
        s_i=g.element(u_bits),
        s_j=g.element(v_bits),
    )
    problems = witness_problems(witness.s_i, witness.s_j, pair)
    if problems:
        raise InvalidWitness(f"pattern violated for pair {pair}: " + "; ".join(problems))
    return witness


def find_witness(
    g: StabilizerGroup,
    alpha1: int,
    alpha2: int,
    matrices: CommutationMatrixSet | None = None,
) -> WitnessPair:
    """Deterministic witness for the pair (alpha1, alpha2).

    Party alpha2 is eliminated through the vanishing sum of all commutation
    matrices. The first v in lexicographic order with C^{a1} v outside the
    span of {C^a v : a not in the pair} fixes s_j; u solves u.w_1 = 1 and
    u.w_j = 0 over a basis of {C^a v : a != a2} that starts with w_1 = C^{a1} v.

    The v sweep is complete: when it finds nothing, no pair of group
    elements has the two-site pattern.

    Raises:
        NotGME: No witness exists and the group is not GME; carries the
            violating bipartition.
        NoTwoSiteWitness: No witness exists although every bipartition is
            entangled (possible from N = 6 on).
        DomainError: alpha1 == alpha2 or a party out of range.
    """
    first, second = _check_pair(g, alpha1, alpha2)
    cms = matrices if matrices is not None else commutation_matrices(g)
    others = [a for a in range(1, g.n_qubits + 1) if a not in (first, second)]
    k = g.k

    for t in range(1, 1 << k):
        v_bits = _lex_vector(t, k)
        w1 = cms[first].matvec(v_bits)
        if w1 == 0:
            continue
        images = [cms[a].matvec(v_bits) for a in others]
        span = EchelonBasis()
        for image in images:
            span.add(image)
        if span.contains(w1):
            continue

        rows = [w1]
        basis = EchelonBasis()
        basis.add(w1)
        rows.extend(image for image in images if basis.add(image))
        u_bits = solve(rows, [1] + [0] * (len(rows) - 1), k)
        if u_bits is None:
            raise InvalidWitness("inconsistent system for u; commutation matrices are corrupt")
        logger.debug(
            f"Witness for ({first}, {second}): v={bits_to_vector(v_bits, k)} "
            f"u={bits_to_vector(u_bits, k)}"
        )
        return witness_from_vectors(
            g, first, second, bits_to_vector(u_bits, k), bits_to_vector(v_bits, k)
        )

    verdict = is_gme(g)
    if verdict.is_gme:
        raise NoTwoSiteWitness((first, second))
    raise NotGME(bipartition=verdict.violating_bipartition, pair=(first, second))


def find_all_witnesses(
    g: StabilizerGroup, workers: int = 1
) -> dict[tuple[int, int], WitnessPair]:
    """Witnesses for all N(N-1)/2 pairs, keyed by (a1, a2) with a1 < a2.

    Raises:
        NotGME, NoTwoSiteWitness: For the first pair (in lexicographic
            order) without a witness.
    """
    cms = commutation_matrices(g)
    pairs = list(itertools.combinations(range(1, g.n_qubits + 1), 2))

    def search(pair: tuple[int, int]) -> WitnessPair:
        return find_witness(g, pair[0], pair[1], matrices=cms)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(search, pairs))
    else:
        found = [search(pair) for pair in pairs]
    logger.info(f"Found witnesses for all {len(pairs)} pairs")
    return dict(zip(pairs, found))


def enumerate_witness_pairs(
    g: StabilizerGroup, alpha1: int, alpha2: int, first_only: bool = False
) -> list[tuple[int, int]]:
    """Exhaustive scan of all 2^k x 2^k element pairs; returns (mask_i, mask_j) hits."""
    pair = _check_pair(g, alpha1, alpha2)
    elements = enumerate_group(g)
    pattern = tuple(1 if site in pair else 0 for site in range(1, g.n_qubits + 1))
    hits = []
    for mask_i, s_i in enumerate(elements):
        for mask_j, s_j in enumerate(elements):
            if site_commutation_phases(s_i, s_j) == pattern:
                hits.append((mask_i, mask_j))
                if first_only:
                    return hits
    return hits


# =============================================================================
# Protocol synthesis
# =============================================================================


def synthesize_protocol(w: WitnessPair) -> MeasurementProtocol:
    """Bases and sign tables for every party outside the witness pair.

    Identity on both elements measures Z; otherwise the non-identity letter
    (the two letters agree when both are non-identity).
    """
    problems = witness_problems(w.s_i, w.s_j, w.pair)
    if problems:
        raise InvalidWitness(f"pattern violated for pair {w.pair}: " + "; ".join(problems))

    bases: dict[int, str] = {}
    tau_i: dict[int, tuple[int, int]] = {}
    tau_j: dict[int, tuple[int, int]] = {}
    for alpha in range(1, w.s_i.n_sites + 1):
        if alpha in w.pair:
            continue
        li, lj = site_letter(w.s_i, alpha), site_letter(w.s_j, alpha)
        if li == "I" and lj == "I":
            basis = "Z"
        elif li == "I":
            basis = lj
        elif lj == "I" or li == lj:
            basis = li
        else:
            raise InvalidWitness(f"site {alpha}: letters {li} and {lj} do not commute")
        bases[alpha] = basis
        tau_i[alpha] = (0, 0) if li == "I" else (0, 1)
        tau_j[alpha] = (0, 0) if lj == "I" else (0, 1)
    return MeasurementProtocol(
        pair=w.pair, bases=bases, tau_i=tau_i, tau_j=tau_j, witness=w
    )


def _check_outcomes(p: MeasurementProtocol, outcomes: Mapping[int, int]) -> None:
    if set(outcomes) != set(p.bases):
        missing = sorted(set(p.bases) - set(outcomes))
        extra = sorted(set(outcomes) - set(p.bases))
        raise DomainError(f"outcome keys mismatch: missing {missing}, extra {extra}")
    bad = {a: b for a, b in outcomes.items() if b not in (0, 1)}
    if bad:
        raise DomainError(f"outcomes must be bits, got {bad}")


def _pair_operator(
    s: PauliOperator, pair: tuple[int, int], tau: Mapping[int, tuple[int, int]], outcomes: Mapping[int, int]
) -> PauliOperator:
    sign = s.hermitian_sign + sum(tau[a][outcomes[a]] for a in outcomes)
    letters = site_letter(s, pair[0]) + site_letter(s, pair[1])
    return PauliOperator.from_letters(letters, sign=sign % 2)


def post_measurement_stabilizers(
    p: MeasurementProtocol, outcomes: Mapping[int, int]
) -> tuple[PauliOperator, PauliOperator]:
    """Signed two-qubit stabilizers of the pair after the outcomes ``outcomes``.

    Each carries the sign of the full element times the outcome signs on the
    sites where that element is not the identity.

    Example:
        For the five-qubit code with s_i = g_3, s_j = g_4 on pair (1, 4),
        outcomes {2: 1, 3: 0, 5: 0} give (+XZ, -ZX).
    """
    _check_outcomes(p, outcomes)
    s_tilde_i = _pair_operator(p.witness.s_i, p.pair, p.tau_i, outcomes)
    s_tilde_j = _pair_operator(p.witness.s_j, p.pair, p.tau_j, outcomes)
    return s_tilde_i, s_tilde_j


_RESIDUALS = {
    (0, 0): ("I", IDENTITY),
    (1, 0): ("Z", PAULI_Z),
    (0, 1): ("X", PAULI_X),
    (1, 1): ("Y", PAULI_Y),
}


def corrective_unitaries(
    s_tilde_i: PauliOperator, s_tilde_j: PauliOperator
) -> CorrectionRule:
    """Local Cliffords with (U1 (x) U2) s~_i (...)^dag = +XX and s~_j -> +ZZ.

    Raises:
        InvalidWitness: The operators are not two-qubit Hermitian Paulis that
            anticommute on both sites.
    """
    for op in (s_tilde_i, s_tilde_j):
        if op.d != 2 or op.n_sites != 2 or not op.is_hermitian():
            raise InvalidWitness(f"{op} is not a two-qubit Hermitian Pauli")
    if site_commutation_phases(s_tilde_i, s_tilde_j) != (1, 1):
        raise InvalidWitness(
            f"{s_tilde_i} and {s_tilde_j} must anticommute on both sites"
        )

    letters_i, letters_j = s_tilde_i.letters, s_tilde_j.letters
    u_first = find_clifford(letters_i[0], letters_j[0])
    u_second = find_clifford(letters_i[1], letters_j[1])
    flip_x = conjugate_operator([u_first, u_second], s_tilde_i).hermitian_sign
    flip_z = conjugate_operator([u_first, u_second], s_tilde_j).hermitian_sign
    residual, pauli = _RESIDUALS[(flip_x, flip_z)]
    rule = CorrectionRule(
        s_tilde_i=s_tilde_i,
        s_tilde_j=s_tilde_j,
        u_first=u_first.then(pauli),
        u_second=u_second,
        residual=residual,
    )

    corrected = (apply_correction(rule, s_tilde_i), apply_correction(rule, s_tilde_j))
    if (corrected[0].to_text(), corrected[1].to_text()) != ("+XX", "+ZZ"):
        raise InvalidWitness(f"correction produced {corrected[0]}, {corrected[1]}")
    return rule


def apply_correction(rule: CorrectionRule, op: PauliOperator) -> PauliOperator:
    """Conjugate a two-qubit operator by U_{a1} (x) U_{a2}."""
    return conjugate_operator([rule.u_first, rule.u_second], op)


def protocol_corrections(
    p: MeasurementProtocol,
) -> list[tuple[dict[int, int], CorrectionRule]]:
    """Correction rule for every outcome vector of the protocol."""
    return [
        (outcomes, corrective_unitaries(*post_measurement_stabilizers(p, outcomes)))
        for outcomes in p.outcome_vectors()
    ]


__all__ = [
    "WitnessPair",
    "MeasurementProtocol",
    "CorrectionRule",
    "witness_problems",
    "witness_from_vectors",
    "find_witness",
    "find_all_witnesses",
    "enumerate_witness_pairs",
    "synthesize_protocol",
    "post_measurement_stabilizers",
    "corrective_unitaries",
    "apply_correction",
    "protocol_corrections",
]
