from __future__ import annotations

import logging
import os

from .constants import LOG_LEVEL_ENV
from .pauli import (
    PauliOperator,
    parse_pauli,
    to_text,
    multiply,
    commutation_phase,
    site_commutation_phases,
    restrict,
)
from .stabilizer import (
    StabilizerGroup,
    BasisChange,
    GroupValidator,
    validate_and_canonicalize,
    subspace_dimension,
    enumerate_group,
    commutation_matrices,
    is_gme,
    max_gme_dimension,
    apply_basis_change,
    random_stabilizer_group,
)
from .clifford import CliffordDescriptor, find_clifford
from .witness import (
    WitnessPair,
    MeasurementProtocol,
    CorrectionRule,
    find_witness,
    find_all_witnesses,
    synthesize_protocol,
    post_measurement_stabilizers,
    corrective_unitaries,
)
from .sim import verify_mfnl_certificate, recheck_certificate
from .qudit_graph import (
    Multigraph,
    QuditStabilizerGroup,
    graph_generators,
    graph_protocol_verify,
    verify_graph_certificate,
    lemma3_pattern_scan,
)
from .nonlocality import (
    Behavior,
    validate_behavior,
    chained_value,
    quantum_chained_minimum,
    theorem2_bound,
    gmnl_threshold,
    figure_data,
)
from .data_models import (
    GMEVerdict,
    CertificateReport,
    GraphCertificateReport,
    PairBound,
    BoundResult,
    ThresholdResult,
    ValidationResult,
)
from .exceptions import (
    StabilizerNonlocalityError,
    ParseError,
    InvalidGroupError,
    NotGME,
    NoTwoSiteWitness,
    CertificateFailure,
)

logger = logging.getLogger(__name__)

if not logger.handlers:
    handler = logging.StreamHandler()
    formatter = logging.Formatter("[%(levelname)s] %(message)s")
    handler.setFormatter(formatter)
    logger.addHandler(handler)

level_str = os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
logger.setLevel(getattr(logging, level_str, logging.WARNING))

__all__ = [
    # Operators
    "PauliOperator",
    "parse_pauli",
    "to_text",
    "multiply",
    "commutation_phase",
    "site_commutation_phases",
    "restrict",
    # Groups
    "StabilizerGroup",
    "BasisChange",
    "GroupValidator",
    "validate_and_canonicalize",
    "subspace_dimension",
    "enumerate_group",
    "commutation_matrices",
    "is_gme",
    "max_gme_dimension",
    "apply_basis_change",
    "random_stabilizer_group",
    # Witnesses and protocols
    "CliffordDescriptor",
    "find_clifford",
    "WitnessPair",
    "MeasurementProtocol",
    "CorrectionRule",
    "find_witness",
    "find_all_witnesses",
    "synthesize_protocol",
    "post_measurement_stabilizers",
    "corrective_unitaries",
    "verify_mfnl_certificate",
    "recheck_certificate",
    # Qudit graph states
    "Multigraph",
    "QuditStabilizerGroup",
    "graph_generators",
    "graph_protocol_verify",
    "verify_graph_certificate",
    "lemma3_pattern_scan",
    # Chained inequalities and bounds
    "Behavior",
    "validate_behavior",
    "chained_value",
    "quantum_chained_minimum",
    "theorem2_bound",
    "gmnl_threshold",
    "figure_data",
    # Results
    "GMEVerdict",
    "CertificateReport",
    "GraphCertificateReport",
    "PairBound",
    "BoundResult",
    "ThresholdResult",
    "ValidationResult",
    # Errors
    "StabilizerNonlocalityError",
    "ParseError",
    "InvalidGroupError",
    "NotGME",
    "NoTwoSiteWitness",
    "CertificateFailure",
]

# Parsers and emitters for the command line
try:
    from . import utils

    __all__.append("utils")
except ImportError:
    pass
