"""
Qudit graph states and the two-site pattern scan for general qudit groups.

Generators follow ``g_j = X_j prod_l Z_l^{Gamma_jl}``; the graph state is their
unique joint +1 eigenvector. Measuring every vertex except (i, j) in the
computational basis leaves the pair maximally entangled with Schmidt rank
``q = d / gcd(d, Gamma_ij)`` once the outcome-dependent Z phases are undone.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .constants import (
    EXPECTATION_TOL,
    FIDELITY_TOL,
    QUDIT_DENSE_MAX_DIM,
    QUDIT_SCAN_MAX_ELEMENTS,
    ZERO_PROBABILITY_TOL,
)
from .data_models import (
    GraphBranchRecord,
    GraphCertificateReport,
    GraphPairCertificate,
    PatternScanResult,
)
from .exceptions import (
    CapacityError,
    CertificateFailure,
    DimensionError,
    DomainError,
    NotAbelian,
)
from .pauli import PauliOperator, check_site, commutation_phase, multiply, parse_pauli
from .stabilizer import StabilizerGroup

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph on vertices 1..n; ``gamma`` holds edge multiplicities."""

    n_vertices: int
    gamma: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n_vertices < 1:
            raise DomainError("a graph needs at least one vertex")
        if len(self.gamma) != self.n_vertices or any(
            len(row) != self.n_vertices for row in self.gamma
        ):
            raise DimensionError(f"adjacency must be {self.n_vertices}x{self.n_vertices}")
        for i, row in enumerate(self.gamma):
            if row[i] != 0:
                raise DomainError(f"vertex {i + 1} has a self-loop")
            for j, value in enumerate(row):
                if value < 0:
                    raise DomainError(f"negative multiplicity at ({i + 1}, {j + 1})")
                if value != self.gamma[j][i]:
                    raise DomainError(f"adjacency is not symmetric at ({i + 1}, {j + 1})")

    @classmethod
    def from_edges(
        cls, n_vertices: int, edges: Iterable[tuple[int, int, int]]
    ) -> Multigraph:
        """Build from 1-based ``(u, v, multiplicity)`` triples; repeated edges add up."""
        gamma = [[0] * n_vertices for _ in range(n_vertices)]
        for u, v, multiplicity in edges:
            check_site(u, n_vertices)
            check_site(v, n_vertices)
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            gamma[u - 1][v - 1] += multiplicity
            gamma[v - 1][u - 1] += multiplicity
        return cls(n_vertices, tuple(tuple(row) for row in gamma))

    def multiplicity(self, i: int, j: int) -> int:
        check_site(i, self.n_vertices)
        check_site(j, self.n_vertices)
        return self.gamma[i - 1][j - 1]

    def edges(self, d: int | None = None) -> list[tuple[int, int, int]]:
        """Edges ``(u, v, m)`` with u < v; with ``d``, multiplicities reduced mod d
        and vanishing ones left out."""
        found = []
        for u, v in itertools.combinations(range(1, self.n_vertices + 1), 2):
            m = self.gamma[u - 1][v - 1]
            if d is not None:
                m %= d
            if m:
                found.append((u, v, m))
        return found

    def to_networkx(self, d: int | None = None) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.n_vertices + 1))
        for u, v, m in self.edges(d):
            graph.add_edge(u, v, multiplicity=m)
        return graph


@dataclass(frozen=True)
class QuditStabilizerGroup:
    """Pairwise commuting qudit Pauli operators with a common local dimension."""

    d: int
    generators: tuple[PauliOperator, ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise DomainError("a stabilizer group needs at least one generator")
        n = self.generators[0].n_sites
        for op in self.generators:
            if op.d != self.d:
                raise DimensionError(f"generator {op} has d={op.d}, expected {self.d}")
            if op.n_sites != n:
                raise DimensionError(f"generator {op} has {op.n_sites} sites, expected {n}")
        for i, j in itertools.combinations(range(len(self.generators)), 2):
            if commutation_phase(self.generators[i], self.generators[j]):
                raise NotAbelian(i + 1, j + 1)

    @property
    def n_sites(self) -> int:
        return self.generators[0].n_sites

    @property
    def k(self) -> int:
        return len(self.generators)

    def texts(self) -> list[str]:
        return [op.to_text() for op in self.generators]

    @classmethod
    def from_texts(cls, texts: Iterable[str], d: int) -> QuditStabilizerGroup:
        return cls(d, tuple(parse_pauli(t, d) for t in texts))

    @classmethod
    def from_stabilizer(cls, g: StabilizerGroup) -> QuditStabilizerGroup:
        return cls(2, g.generators)


# =============================================================================
# Graph states
# =============================================================================


def graph_generators(G: Multigraph, d: int) -> QuditStabilizerGroup:
    """``g_j = X_j prod_l Z_l^{Gamma_jl mod d}`` for every vertex j."""
    if d < 2:
        raise DomainError(f"local dimension must be >= 2, got {d}")
    n = G.n_vertices
    generators = tuple(
        PauliOperator(
            d=d,
            x=tuple(1 if l == j else 0 for l in range(n)),
            z=tuple(G.gamma[j][l] % d for l in range(n)),
        )
        for j in range(n)
    )
    return QuditStabilizerGroup(d, generators)


def is_connected_effective(G: Multigraph, d: int) -> bool:
    """Connectivity after dropping edges whose multiplicity vanishes mod d."""
    return bool(nx.is_connected(G.to_networkx(d)))


def entanglement_dimension(d: int, gamma_ij: int) -> int:
    """Schmidt rank q = d / gcd(d, Gamma_ij) of the pair left by the protocol."""
    reduced = gamma_ij % d
    if reduced == 0:
        raise DomainError(f"multiplicity {gamma_ij} vanishes mod {d}: no edge protocol")
    return d // math.gcd(d, reduced)


def graph_state_vector(G: Multigraph, d: int) -> np.ndarray:
    """Dense |G>: the generator projectors applied to |0...0>, normalized."""
    dim = d**G.n_vertices
    if dim > QUDIT_DENSE_MAX_DIM:
        raise CapacityError("QUDIT_DENSE_MAX_DIM", QUDIT_DENSE_MAX_DIM, dim)
    vector = np.zeros(dim, dtype=complex)
    vector[0] = 1.0
    for generator in graph_generators(G, d).generators:
        total = vector.copy()
        current = vector
        for _ in range(d - 1):
            current = generator.apply(current)
            total = total + current
        vector = total / d
    return vector / np.linalg.norm(vector)


def _pair_operators(d: int, gamma: int) -> tuple[PauliOperator, PauliOperator]:
    """X_i Z_j^Gamma and Z_i^Gamma X_j on the two remaining sites."""
    return (
        PauliOperator(d=d, x=(1, 0), z=(0, gamma)),
        PauliOperator(d=d, x=(0, 1), z=(gamma, 0)),
    )


def _phase_correction(d: int, c_i: int, c_j: int) -> np.ndarray:
    """Diagonal of Z_i^{-c_i} Z_j^{-c_j} on the d x d pair."""
    omega = np.exp(2j * np.pi / d)
    a = np.arange(d)
    return np.outer(omega ** (-c_i * a), omega ** (-c_j * a))


def graph_protocol_verify(
    G: Multigraph,
    d: int,
    i: int,
    j: int,
    fidelity_tol: float = FIDELITY_TOL,
    state: np.ndarray | None = None,
) -> GraphPairCertificate:
    """Measure every other vertex in the computational basis, for all outcomes.

    Each branch is phase-corrected by Z_i^{-c_i} Z_j^{-c_j} with
    ``c_i = sum_beta Gamma_i,beta a_beta``, checked against the stabilizers
    X_i Z_j^Gamma and Z_i^Gamma X_j, and rotated onto |phi+>_q by the Schmidt
    bases of the (outcome-independent) corrected state.
    """
    check_site(i, G.n_vertices)
    check_site(j, G.n_vertices)
    if i == j:
        raise DomainError("graph protocol needs two distinct vertices")
    i, j = min(i, j), max(i, j)
    gamma = G.multiplicity(i, j) % d
    q = entanglement_dimension(d, gamma)
    psi = state if state is not None else graph_state_vector(G, d)
    tensor = psi.reshape((d,) * G.n_vertices)
    others = [beta for beta in range(1, G.n_vertices + 1) if beta not in (i, j)]
    stabilizers = _pair_operators(d, gamma)

    certificate = GraphPairCertificate(pair=(i, j), multiplicity=gamma, q=q)
    rotation: tuple[np.ndarray, np.ndarray] | None = None
    total_probability = 0.0
    for values in itertools.product(range(d), repeat=len(others)):
        outcomes = dict(zip(others, values))
        index: list[int | slice] = [slice(None)] * G.n_vertices
        for beta, a in outcomes.items():
            index[beta - 1] = a
        block = tensor[tuple(index)]
        probability = float(np.sum(np.abs(block) ** 2))
        total_probability += probability
        certificate.branch_count += 1
        if probability < ZERO_PROBABILITY_TOL:
            certificate.diagnostics.append(f"pair {(i, j)} outcomes {outcomes}: zero probability")
            continue

        c_i = sum(G.gamma[i - 1][b - 1] * a for b, a in outcomes.items()) % d
        c_j = sum(G.gamma[j - 1][b - 1] * a for b, a in outcomes.items()) % d
        corrected = block * _phase_correction(d, c_i, c_j) / np.sqrt(probability)
        flat = corrected.reshape(d * d)
        stabilized = all(
            np.linalg.norm(op.apply(flat) - flat) < math.sqrt(fidelity_tol)
            for op in stabilizers
        )

        if rotation is None:
            left, _, right = np.linalg.svd(corrected)
            rotation = (left.conj().T, right.conj())
        rotated = rotation[0] @ corrected @ rotation[1].T
        overlap = np.trace(rotated[:q, :q]) / np.sqrt(q)
        fidelity = float(abs(overlap) ** 2)
        schmidt = np.linalg.svd(corrected, compute_uv=False)
        target = np.where(np.arange(d) < q, 1.0 / np.sqrt(q), 0.0)
        deviation = float(np.max(np.abs(schmidt - target)))

        certificate.branches.append(
            GraphBranchRecord(
                outcomes=outcomes,
                probability=probability,
                correction_phases=(int(c_i), int(c_j)),
                schmidt_coefficients=[float(s) for s in schmidt],
                fidelity=fidelity,
                stabilized=stabilized,
            )
        )
        certificate.max_schmidt_deviation = max(certificate.max_schmidt_deviation, deviation)
        certificate.min_fidelity = (
            fidelity if certificate.min_fidelity is None else min(certificate.min_fidelity, fidelity)
        )
        where = f"pair {(i, j)} outcomes {outcomes}"
        if fidelity < 1.0 - fidelity_tol:
            certificate.diagnostics.append(f"{where}: fidelity {fidelity:.12f}")
        if not stabilized:
            certificate.diagnostics.append(f"{where}: pair stabilizers violated")
        if deviation > math.sqrt(fidelity_tol):
            certificate.diagnostics.append(f"{where}: Schmidt spectrum not uniform of rank {q}")

    if abs(total_probability - 1.0) > EXPECTATION_TOL:
        certificate.diagnostics.append(f"outcome probabilities sum to {total_probability:.12f}")
    logger.debug(
        f"Graph pair {(i, j)} (d={d}, q={q}): {certificate.branch_count} branches, "
        f"min fidelity {certificate.min_fidelity}"
    )
    return certificate


def verify_graph_certificate(
    G: Multigraph,
    d: int,
    pairs: Sequence[tuple[int, int]] | None = None,
    fidelity_tol: float = FIDELITY_TOL,
    workers: int = 1,
    raise_on_failure: bool = True,
) -> GraphCertificateReport:
    """Run the edge protocol on ``pairs`` (default: every edge surviving mod d)."""
    selected = list(pairs) if pairs is not None else [(u, v) for u, v, _ in G.edges(d)]
    psi = graph_state_vector(G, d)

    def run(pair: tuple[int, int]) -> GraphPairCertificate:
        return graph_protocol_verify(G, d, pair[0], pair[1], fidelity_tol, state=psi)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            certificates = list(pool.map(run, selected))
    else:
        certificates = [run(pair) for pair in selected]
    report = GraphCertificateReport(
        n_vertices=G.n_vertices,
        d=d,
        connected=is_connected_effective(G, d),
        pairs=certificates,
    )
    if not report.connected:
        logger.warning(f"Graph is disconnected at d={d}; the state is not GME")
    if raise_on_failure and any(not c.passed for c in certificates):
        failing = next(c for c in certificates if not c.passed)
        raise CertificateFailure(
            failing.diagnostics[0],
            pair=failing.pair,
            diagnostics={"messages": list(failing.diagnostics)},
            report=report,
        )
    return report


# =============================================================================
# Two-site pattern scan
# =============================================================================


def _element_count(g: QuditStabilizerGroup) -> int:
    count = g.d**g.k
    if count > QUDIT_SCAN_MAX_ELEMENTS:
        raise CapacityError("QUDIT_SCAN_MAX_ELEMENTS", QUDIT_SCAN_MAX_ELEMENTS, count)
    return count


def _exponent_table(g: QuditStabilizerGroup) -> np.ndarray:
    """All exponent vectors e in Z_d^k, e_1 most significant."""
    return np.array(list(itertools.product(range(g.d), repeat=g.k)), dtype=np.int64)


def element_from_exponents(g: QuditStabilizerGroup, exponents: Sequence[int]) -> PauliOperator:
    """``prod_m g_m^{e_m}`` in generator order."""
    result = PauliOperator.identity(g.n_sites, g.d)
    for generator, e in zip(g.generators, exponents):
        result = multiply(result, generator.power(int(e)))
    return result


def enumerate_qudit_group(g: QuditStabilizerGroup) -> list[PauliOperator]:
    """Every element, in the order of :func:`_exponent_table`."""
    _element_count(g)
    return [element_from_exponents(g, e) for e in _exponent_table(g)]


def qudit_commutation_matrices(g: QuditStabilizerGroup) -> np.ndarray:
    """Array C[alpha, m, n] = site-alpha commutation phase of g_m and g_n, mod d."""
    xs = np.array([op.x for op in g.generators], dtype=np.int64)
    zs = np.array([op.z for op in g.generators], dtype=np.int64)
    c = xs.T[:, :, None] * zs.T[:, None, :] - zs.T[:, :, None] * xs.T[:, None, :]
    return c % g.d


def lemma3_pattern_scan(
    g: QuditStabilizerGroup, alpha1: int, alpha2: int
) -> PatternScanResult:
    """Search all element pairs for phases nonzero exactly at alpha1 and alpha2.

    The phase of elements e, f at site alpha is ``e^T C^alpha f mod d``, so each
    first element is checked against all second elements in one product.
    """
    check_site(alpha1, g.n_sites)
    check_site(alpha2, g.n_sites)
    if alpha1 == alpha2:
        raise DomainError("pattern scan needs two distinct sites")
    pair = (min(alpha1, alpha2), max(alpha1, alpha2))
    count = _element_count(g)
    exponents = _exponent_table(g)
    matrices = qudit_commutation_matrices(g)
    wanted = np.zeros(g.n_sites, dtype=bool)
    wanted[[pair[0] - 1, pair[1] - 1]] = True

    scanned = 0
    for row, e in enumerate(exponents):
        left = np.einsum("m,amn->an", e, matrices) % g.d
        phases = (exponents @ left.T) % g.d
        matches = np.all((phases != 0) == wanted, axis=1)
        scanned += count
        if matches.any():
            col = int(np.argmax(matches))
            s_i = element_from_exponents(g, e)
            s_j = element_from_exponents(g, exponents[col])
            logger.debug(f"Pattern for {pair} found at element pair ({row}, {col})")
            return PatternScanResult(
                found=True,
                pair=pair,
                d=g.d,
                pairs_scanned=scanned,
                s_i=s_i.to_text(),
                s_j=s_j.to_text(),
            )
    logger.info(f"No two-site pattern for {pair} among {count} elements (d={g.d})")
    return PatternScanResult(found=False, pair=pair, d=g.d, pairs_scanned=scanned)


__all__ = [
    "Multigraph",
    "QuditStabilizerGroup",
    "graph_generators",
    "is_connected_effective",
    "entanglement_dimension",
    "graph_state_vector",
    "graph_protocol_verify",
    "verify_graph_certificate",
    "element_from_exponents",
    "enumerate_qudit_group",
    "qudit_commutation_matrices",
    "lemma3_pattern_scan",
]
