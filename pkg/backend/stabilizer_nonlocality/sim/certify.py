"""
Multipartite-fully-nonlocal certificates.

For every party pair a witness is found, a measurement protocol synthesized
and every outcome branch executed on the requested engines:

- ``tableau``: the signed pair read from the tableau must equal the symbolic
  pair and correct to (+XX, +ZZ)
- ``dense``: the corrected two-qubit state must have fidelity >= 1 - tol
  with |phi+> and be stabilized by the symbolic pair
- ``both``: all of the above, and the engines must agree on which branches
  are possible

Branches with probability zero are skipped and counted.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np

from ..constants import (
    DEFAULT_SAMPLE_SEED,
    DENSE_MATRIX_MAX_QUBITS,
    EXPECTATION_TOL,
    FIDELITY_TOL,
    TABLEAU_BRANCH_CAP,
)
from ..data_models import BranchRecord, CertificateReport, PairCertificate, ValidationResult
from ..exceptions import (
    CapacityError,
    CertificateFailure,
    ContradictionError,
    DomainError,
    InvalidWitness,
    NotGME,
    StabilizerNonlocalityError,
    ZeroProbability,
)
from ..stabilizer import StabilizerGroup, is_gme
from ..witness import (
    MeasurementProtocol,
    WitnessPair,
    apply_correction,
    corrective_unitaries,
    find_all_witnesses,
    post_measurement_stabilizers,
    synthesize_protocol,
    witness_from_vectors,
)
from .dense import DenseState, corrected_fidelity, dense_projector, dense_run_protocol
from .tableau import tableau_run_protocol

logger = logging.getLogger(__name__)

MODES = ("dense", "tableau", "both")


def _branch_outcomes(
    p: MeasurementProtocol, sample_cap: int, seed: int
) -> tuple[list[dict[int, int]], bool]:
    """All outcome vectors, or ``sample_cap`` distinct ones drawn with ``seed``."""
    if p.branch_count <= sample_cap:
        return list(p.outcome_vectors()), False
    sites = p.measured_sites
    rng = np.random.default_rng([seed, *p.pair])
    chosen: set[tuple[int, ...]] = set()
    while len(chosen) < sample_cap:
        chosen.add(tuple(int(b) for b in rng.integers(0, 2, size=len(sites))))
    logger.warning(
        f"Pair {p.pair}: sampling {sample_cap} of {p.branch_count} outcome branches"
    )
    return [dict(zip(sites, bits)) for bits in sorted(chosen)], True


def _run_branch(
    g: StabilizerGroup,
    p: MeasurementProtocol,
    outcomes: dict[int, int],
    mode: str,
    rho: DenseState | None,
    fidelity_tol: float,
) -> tuple[BranchRecord, list[str]]:
    record = BranchRecord(outcomes=outcomes)
    problems: list[str] = []
    s_tilde_i, s_tilde_j = post_measurement_stabilizers(p, outcomes)
    rule = corrective_unitaries(s_tilde_i, s_tilde_j)
    record.s_tilde_i = s_tilde_i.to_text()
    record.s_tilde_j = s_tilde_j.to_text()
    record.correction = [rule.u_first.label, rule.u_second.label]
    where = f"pair {p.pair} outcomes {outcomes}"

    tableau_feasible: bool | None = None
    if mode in ("tableau", "both"):
        try:
            got_i, got_j = tableau_run_protocol(g, p, outcomes)
        except ContradictionError:
            tableau_feasible = False
        else:
            tableau_feasible = True
            mismatch = (got_i, got_j) != (s_tilde_i, s_tilde_j)
            record.sign_mismatch = int(mismatch)
            if mismatch:
                problems.append(f"{where}: tableau gives {got_i}, {got_j}")
            corrected = (apply_correction(rule, got_i), apply_correction(rule, got_j))
            if (corrected[0].to_text(), corrected[1].to_text()) != ("+XX", "+ZZ"):
                problems.append(f"{where}: corrected pair is {corrected[0]}, {corrected[1]}")

    dense_feasible: bool | None = None
    if rho is not None:
        try:
            reduced, probability = dense_run_protocol(rho, p, outcomes)
        except ZeroProbability as exc:
            dense_feasible = False
            record.probability = exc.probability
        else:
            dense_feasible = True
            record.probability = probability
            record.fidelity = corrected_fidelity(reduced, rule)
            if record.fidelity < 1.0 - fidelity_tol:
                problems.append(f"{where}: fidelity {record.fidelity:.12f}")
            for op in (s_tilde_i, s_tilde_j):
                value = reduced.expectation(op)
                if abs(value - 1.0) > EXPECTATION_TOL:
                    problems.append(f"{where}: <{op}> = {value.real:.12f}")

    if tableau_feasible is not None and dense_feasible is not None:
        if tableau_feasible != dense_feasible:
            problems.append(
                f"{where}: engines disagree on feasibility "
                f"(tableau {tableau_feasible}, dense {dense_feasible})"
            )
    feasible = [f for f in (tableau_feasible, dense_feasible) if f is not None]
    if not all(feasible):
        record.skipped = True
        record.reason = "zero probability"
    return record, problems


def certify_pair(
    g: StabilizerGroup,
    witness: WitnessPair,
    mode: str = "both",
    rho: DenseState | None = None,
    sample_cap: int = TABLEAU_BRANCH_CAP,
    seed: int = DEFAULT_SAMPLE_SEED,
    fidelity_tol: float = FIDELITY_TOL,
) -> PairCertificate:
    """Run every (or a sampled set of) outcome branches for one witness."""
    protocol = synthesize_protocol(witness)
    if mode in ("dense", "both") and rho is None:
        rho = dense_projector(g)
    if mode == "tableau":
        rho = None
        branches, sampled = _branch_outcomes(protocol, sample_cap, seed)
    else:
        branches, sampled = list(protocol.outcome_vectors()), False

    certificate = PairCertificate(
        pair=witness.pair,
        witness=witness.to_dict(),
        protocol=protocol.to_dict(),
        sampled=sampled,
    )
    classes: Counter[str] = Counter()
    total_probability = 0.0
    for outcomes in branches:
        record, problems = _run_branch(g, protocol, outcomes, mode, rho, fidelity_tol)
        certificate.branches.append(record)
        certificate.diagnostics.extend(problems)
        certificate.branch_count += 1
        certificate.sign_mismatch_count += record.sign_mismatch or 0
        total_probability += record.probability or 0.0
        if record.skipped:
            certificate.skipped_branches += 1
            continue
        classes[f"{record.s_tilde_i},{record.s_tilde_j}"] += 1
        if record.fidelity is not None:
            certificate.min_fidelity = (
                record.fidelity
                if certificate.min_fidelity is None
                else min(certificate.min_fidelity, record.fidelity)
            )
    certificate.bell_classes = dict(classes)

    if rho is not None and abs(total_probability - 1.0) > EXPECTATION_TOL:
        certificate.diagnostics.append(
            f"pair {witness.pair}: outcome probabilities sum to {total_probability:.12f}"
        )
    if certificate.skipped_branches:
        logger.warning(
            f"Pair {witness.pair}: skipped {certificate.skipped_branches} "
            "zero-probability branches"
        )
    logger.debug(
        f"Pair {witness.pair}: {certificate.branch_count} branches, "
        f"passed={certificate.passed}"
    )
    return certificate


def verify_mfnl_certificate(
    g: StabilizerGroup,
    mode: str = "both",
    workers: int = 1,
    sample_cap: int = TABLEAU_BRANCH_CAP,
    seed: int = DEFAULT_SAMPLE_SEED,
    fidelity_tol: float = FIDELITY_TOL,
    raise_on_failure: bool = True,
) -> CertificateReport:
    """Certify that every party pair can be steered into |phi+>.

    Raises:
        NotGME: Before any simulation when the group is not GME.
        NoTwoSiteWitness: Some pair has no two-site witness.
        CapacityError: Dense modes with more than DENSE_MATRIX_MAX_QUBITS qubits.
        CertificateFailure: A branch failed and ``raise_on_failure`` is set;
            the full report is attached.
    """
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    verdict = is_gme(g, workers=workers)
    if not verdict.is_gme:
        raise NotGME(bipartition=verdict.violating_bipartition)
    if mode != "tableau" and g.n_qubits > DENSE_MATRIX_MAX_QUBITS:
        raise CapacityError("DENSE_MATRIX_MAX_QUBITS", DENSE_MATRIX_MAX_QUBITS, g.n_qubits)

    witnesses = find_all_witnesses(g, workers=workers)
    rho = dense_projector(g) if mode != "tableau" else None

    def run(witness: WitnessPair) -> PairCertificate:
        return certify_pair(g, witness, mode, rho, sample_cap, seed, fidelity_tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(run, witnesses.values()))
    else:
        pairs = [run(w) for w in witnesses.values()]

    report = CertificateReport(
        n_qubits=g.n_qubits, generators=g.texts(), mode=mode, pairs=pairs
    )
    logger.info(
        f"Certificate over {len(pairs)} pairs in {mode} mode: "
        f"{'passed' if report.passed else 'FAILED'}"
    )
    if raise_on_failure and not report.passed:
        failing = next(p for p in pairs if not p.passed)
        first = next(
            (b.outcomes for b in failing.branches if b.sign_mismatch), None
        )
        raise CertificateFailure(
            failing.diagnostics[0] if failing.diagnostics else f"pair {failing.pair} failed",
            pair=failing.pair,
            outcomes=first,
            diagnostics={"messages": list(failing.diagnostics)},
            report=report,
        )
    return report


def recheck_certificate(document: Mapping[str, Any]) -> ValidationResult:
    """Re-validate a serialized witness or certificate against live objects.

    Products are regenerated from ``u`` and ``v``, protocols re-synthesized and
    compared field by field.
    """
    errors: list[str] = []
    try:
        group = StabilizerGroup.from_texts(document["generators"])
    except KeyError:
        return ValidationResult.failure(["document has no generators"])
    except StabilizerNonlocalityError as exc:
        return ValidationResult.failure([f"generators: {exc}"])

    pairs = document.get("pairs", [])
    for entry in pairs:
        label = entry.get("pair")
        try:
            alpha1, alpha2 = entry["pair"]
            witness_doc = entry["witness"]
            witness = witness_from_vectors(
                group, alpha1, alpha2, witness_doc["u"], witness_doc["v"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"pair {label}: malformed entry ({exc})")
            continue
        except InvalidWitness as exc:
            errors.append(f"pair {label}: {exc}")
            continue
        for key in ("s_i", "s_j"):
            if witness_doc.get(key) != getattr(witness, key).to_text():
                errors.append(f"pair {label}: {key} does not match the generator product")
        protocol: Mapping[str, Any] = synthesize_protocol(witness).to_dict()
        recorded = entry.get("protocol", {})
        for key in ("bases", "tau_i", "tau_j"):
            if recorded.get(key) != protocol[key]:
                errors.append(f"pair {label}: protocol field {key} differs")

    expected_pairs = {
        (a, b) for a, b in itertools.combinations(range(1, group.n_qubits + 1), 2)
    }
    present = {tuple(e["pair"]) for e in pairs if isinstance(e.get("pair"), list)}
    warnings = []
    if document.get("kind") == "mfnl_certificate" and present != expected_pairs:
        warnings.append(f"certificate covers {len(present)} of {len(expected_pairs)} pairs")

    result = (
        ValidationResult.failure(errors, warnings)
        if errors
        else ValidationResult.success(warnings)
    )
    result.details = {"pairs_checked": len(pairs), "n_qubits": group.n_qubits}
    return result


__all__ = ["MODES", "certify_pair", "verify_mfnl_certificate", "recheck_certificate"]
