"""
Result records and their JSON forms.

This module provides both TypedDict (for JSON serialization type hints) and
dataclass (for internal processing) representations of the reports the
library produces.

Recommended usage:
- Use the dataclasses (CertificateReport, ThresholdResult, ...) in code
- Call to_dict() right before writing JSON; the TypedDicts document the shapes
"""

from __future__ import annotations

import dataclasses
import logging
from typing import Any, Dict, List, Optional, Tuple, TypedDict

from .constants import SCHEMA_VERSION

logger = logging.getLogger(__name__)

#: Sign convention stated in every certificate that prints restrictions
RESTRICTION_CONVENTION = (
    "restrictions s^(Q) keep the site letters of s and drop its global phase; "
    "post-measurement pairs carry the sign of s times the outcome signs"
)

# ============================================================================
# TypedDict Definitions (for JSON serialization type hints)
# ============================================================================


class WitnessDict(TypedDict):
    """Witness pair JSON structure."""

    pair: List[int]
    u: List[int]
    v: List[int]
    s_i: str
    s_j: str


class ProtocolDict(TypedDict):
    """Measurement protocol JSON structure."""

    pair: List[int]
    bases: Dict[str, str]
    tau_i: Dict[str, List[int]]
    tau_j: Dict[str, List[int]]


class BranchDict(TypedDict, total=False):
    """One outcome branch of a verified protocol."""

    outcomes: Dict[str, int]
    skipped: bool
    reason: Optional[str]
    probability: Optional[float]
    fidelity: Optional[float]
    s_tilde_i: Optional[str]
    s_tilde_j: Optional[str]
    correction: Optional[List[str]]
    sign_mismatch: Optional[int]


class PairCertificateDict(TypedDict, total=False):
    """Per-pair certificate JSON structure."""

    pair: List[int]
    witness: WitnessDict
    protocol: ProtocolDict
    branch_count: int
    skipped_branches: int
    sampled: bool
    min_fidelity: Optional[float]
    sign_mismatch_count: int
    bell_classes: Dict[str, int]
    diagnostics: List[str]
    passed: bool
    branches: List[BranchDict]


class CertificateReportDict(TypedDict, total=False):
    """Full certificate JSON structure."""

    schema_version: str
    kind: str
    n_qubits: int
    generators: List[str]
    mode: str
    convention: str
    passed: bool
    pairs: List[PairCertificateDict]


class ThresholdDict(TypedDict):
    """Threshold JSON structure."""

    schema_version: str
    n_parties: int
    d: int
    pair_requirement: float
    n_min: int
    m: int
    chained_value: float


# ============================================================================
# Dataclass Definitions (for internal processing)
# ============================================================================


@dataclasses.dataclass
class GMEVerdict:
    """Outcome of the bipartition scan."""

    is_gme: bool
    n_parties: int
    bipartitions_checked: int
    violating_bipartition: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.is_gme

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["violating_bipartition"] = (
            list(self.violating_bipartition) if self.violating_bipartition else None
        )
        return data


@dataclasses.dataclass
class BranchRecord:
    outcomes: Dict[int, int]
    skipped: bool = False
    reason: Optional[str] = None
    probability: Optional[float] = None
    fidelity: Optional[float] = None
    s_tilde_i: Optional[str] = None
    s_tilde_j: Optional[str] = None
    correction: Optional[List[str]] = None
    sign_mismatch: Optional[int] = None

    def to_dict(self) -> BranchDict:
        return BranchDict(
            outcomes={str(k): v for k, v in sorted(self.outcomes.items())},
            skipped=self.skipped,
            reason=self.reason,
            probability=self.probability,
            fidelity=self.fidelity,
            s_tilde_i=self.s_tilde_i,
            s_tilde_j=self.s_tilde_j,
            correction=list(self.correction) if self.correction is not None else None,
            sign_mismatch=self.sign_mismatch,
        )


@dataclasses.dataclass
class PairCertificate:
    """Verification status of one party pair.

    ``sign_mismatch_count`` counts branches where the tableau-extracted pair
    differs from the symbolic one; a passing certificate has zero.
    """

    pair: Tuple[int, int]
    witness: WitnessDict
    protocol: ProtocolDict
    branch_count: int = 0
    skipped_branches: int = 0
    sampled: bool = False
    min_fidelity: Optional[float] = None
    sign_mismatch_count: int = 0
    bell_classes: Dict[str, int] = dataclasses.field(default_factory=dict)
    diagnostics: List[str] = dataclasses.field(default_factory=list)
    branches: List[BranchRecord] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.diagnostics and self.sign_mismatch_count == 0

    def to_dict(self, include_branches: bool = True) -> PairCertificateDict:
        data: PairCertificateDict = {
            "pair": list(self.pair),
            "witness": self.witness,
            "protocol": self.protocol,
            "branch_count": self.branch_count,
            "skipped_branches": self.skipped_branches,
            "sampled": self.sampled,
            "min_fidelity": self.min_fidelity,
            "sign_mismatch_count": self.sign_mismatch_count,
            "bell_classes": dict(sorted(self.bell_classes.items())),
            "diagnostics": list(self.diagnostics),
            "passed": self.passed,
        }
        if include_branches:
            data["branches"] = [b.to_dict() for b in self.branches]
        return data


@dataclasses.dataclass
class CertificateReport:
    """MFNL certificate over all party pairs of a stabilizer group."""

    n_qubits: int
    generators: List[str]
    mode: str
    pairs: List[PairCertificate] = dataclasses.field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return bool(self.pairs) and all(p.passed for p in self.pairs)

    def failing_pairs(self) -> List[Tuple[int, int]]:
        return [p.pair for p in self.pairs if not p.passed]

    def to_dict(self, include_branches: bool = True) -> CertificateReportDict:
        return {
            "schema_version": self.schema_version,
            "kind": "mfnl_certificate",
            "n_qubits": self.n_qubits,
            "generators": list(self.generators),
            "mode": self.mode,
            "convention": RESTRICTION_CONVENTION,
            "passed": self.passed,
            "pairs": [p.to_dict(include_branches) for p in self.pairs],
        }


@dataclasses.dataclass
class GraphBranchRecord:
    outcomes: Dict[int, int]
    probability: float
    correction_phases: Tuple[int, int]
    schmidt_coefficients: List[float]
    fidelity: float
    stabilized: bool

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["outcomes"] = {str(k): v for k, v in sorted(self.outcomes.items())}
        data["correction_phases"] = list(self.correction_phases)
        return data


@dataclasses.dataclass
class GraphPairCertificate:
    """Computational-basis protocol on a qudit graph state for one edge."""

    pair: Tuple[int, int]
    multiplicity: int
    q: int
    branch_count: int = 0
    min_fidelity: Optional[float] = None
    max_schmidt_deviation: float = 0.0
    diagnostics: List[str] = dataclasses.field(default_factory=list)
    branches: List[GraphBranchRecord] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.diagnostics

    def to_dict(self, include_branches: bool = True) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "pair": list(self.pair),
            "multiplicity": self.multiplicity,
            "q": self.q,
            "branch_count": self.branch_count,
            "min_fidelity": self.min_fidelity,
            "max_schmidt_deviation": self.max_schmidt_deviation,
            "diagnostics": list(self.diagnostics),
            "passed": self.passed,
        }
        if include_branches:
            data["branches"] = [b.to_dict() for b in self.branches]
        return data


@dataclasses.dataclass
class GraphCertificateReport:
    n_vertices: int
    d: int
    connected: bool
    pairs: List[GraphPairCertificate] = dataclasses.field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return self.connected and bool(self.pairs) and all(p.passed for p in self.pairs)

    def to_dict(self, include_branches: bool = True) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "kind": "graph_certificate",
            "n_vertices": self.n_vertices,
            "d": self.d,
            "connected": self.connected,
            "passed": self.passed,
            "pairs": [p.to_dict(include_branches) for p in self.pairs],
        }


@dataclasses.dataclass
class PatternScanResult:
    """Exhaustive search for a two-site anticommutation pattern in a qudit group."""

    found: bool
    pair: Tuple[int, int]
    d: int
    pairs_scanned: int
    s_i: Optional[str] = None
    s_j: Optional[str] = None

    def __bool__(self) -> bool:
        return self.found

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["pair"] = list(self.pair)
        return data


@dataclasses.dataclass(frozen=True)
class ChainedResult:
    """Minimized chained-inequality value with the angles that achieve it.

    ``angles`` lists Alice's n angles followed by Bob's n angles.
    """

    n: int
    d: int
    value: float
    analytic: float
    angles: Tuple[float, ...]

    @property
    def classical_bound(self) -> int:
        return self.d - 1

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["angles"] = list(self.angles)
        data["classical_bound"] = self.classical_bound
        return data


@dataclasses.dataclass
class PairBound:
    alpha: int
    alpha_bar: int
    p_lower: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_lower <= 1.0:
            raise ValueError(f"pair bound {self.p_lower} outside [0, 1]")
        if self.alpha == self.alpha_bar:
            raise ValueError(f"pair ({self.alpha}, {self.alpha_bar}) repeats a party")

    @property
    def key(self) -> Tuple[int, int]:
        return (min(self.alpha, self.alpha_bar), max(self.alpha, self.alpha_bar))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PairBound":
        return cls(
            alpha=int(data["alpha"]),
            alpha_bar=int(data["alpha_bar"]),
            p_lower=float(data["p_lower"]),
        )

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclasses.dataclass
class BoundResult:
    """Aggregate lower bound on genuine nonlocality content, raw and clamped."""

    n_parties: int
    raw: float
    clamped: float
    source: str = "pair_bounds"

    @property
    def vacuous(self) -> bool:
        return self.clamped <= 0.0

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["schema_version"] = SCHEMA_VERSION
        return data


@dataclasses.dataclass
class ThresholdResult:
    n_parties: int
    d: int
    pair_requirement: float
    n_min: int
    m: int
    chained_value: float

    def to_dict(self) -> ThresholdDict:
        return ThresholdDict(
            schema_version=SCHEMA_VERSION,
            n_parties=self.n_parties,
            d=self.d,
            pair_requirement=self.pair_requirement,
            n_min=self.n_min,
            m=self.m,
            chained_value=self.chained_value,
        )


# ============================================================================
# Validation Classes
# ============================================================================


@dataclasses.dataclass
class ValidationResult:
    """
    Outcome of a report-style check.

    Attributes:
        is_valid: Whether every check passed
        errors: Error messages
        warnings: Warning messages
        details: Numeric residuals and other diagnostics
    """

    is_valid: bool
    errors: List[str]
    warnings: List[str]
    details: Dict[str, Any] = dataclasses.field(default_factory=dict)

    @classmethod
    def success(cls, warnings: Optional[List[str]] = None) -> "ValidationResult":
        return cls(is_valid=True, errors=[], warnings=warnings or [])

    @classmethod
    def failure(
        cls, errors: List[str], warnings: Optional[List[str]] = None
    ) -> "ValidationResult":
        return cls(is_valid=False, errors=errors, warnings=warnings or [])

    def has_warnings(self) -> bool:
        return len(self.warnings) > 0

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["schema_version"] = SCHEMA_VERSION
        return data


__all__ = [
    "RESTRICTION_CONVENTION",
    "WitnessDict",
    "ProtocolDict",
    "BranchDict",
    "PairCertificateDict",
    "CertificateReportDict",
    "ThresholdDict",
    "GMEVerdict",
    "BranchRecord",
    "PairCertificate",
    "CertificateReport",
    "GraphBranchRecord",
    "GraphPairCertificate",
    "GraphCertificateReport",
    "PatternScanResult",
    "ChainedResult",
    "PairBound",
    "BoundResult",
    "ThresholdResult",
    "ValidationResult",
]
