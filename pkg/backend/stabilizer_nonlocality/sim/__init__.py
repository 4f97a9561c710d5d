"""Protocol execution engines: stabilizer tableau, dense oracle and the certificate loop."""

from .certify import MODES, certify_pair, recheck_certificate, verify_mfnl_certificate
from .dense import (
    PHI_PLUS,
    DenseState,
    basis_eigenvector,
    corrected_fidelity,
    dense_projector,
    dense_pure_code_state,
    dense_run_protocol,
)
from .tableau import StabilizerTableau, tableau_measure, tableau_run_protocol

__all__ = [
    "MODES",
    "certify_pair",
    "recheck_certificate",
    "verify_mfnl_certificate",
    "PHI_PLUS",
    "DenseState",
    "basis_eigenvector",
    "corrected_fidelity",
    "dense_projector",
    "dense_pure_code_state",
    "dense_run_protocol",
    "StabilizerTableau",
    "tableau_measure",
    "tableau_run_protocol",
]
