"""
Command-line front end.

Every subcommand writes one machine-readable artifact (JSON, or CSV for
``figures``) to ``--out`` or stdout and a one-line summary to stderr.

Exit status: 0 pass, 1 certified failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from .constants import (
    DEFAULT_SAMPLE_SEED,
    ENUMERATION_MAX_K,
    EXIT_FAILURE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    FIDELITY_TOL,
    SCHEMA_VERSION,
    TABLEAU_BRANCH_CAP,
)
from .exceptions import (
    CapacityError,
    CertificateFailure,
    DimensionError,
    DomainError,
    InvalidGroupError,
    InvalidPhase,
    NotAbelian,
    NoTwoSiteWitness,
    NotGME,
    ParseError,
    SingularMatrix,
    StabilizerNonlocalityError,
)
from .nonlocality import (
    bound_from_chained_values,
    chained_grid_minimum,
    chained_value,
    figure_data,
    gmnl_threshold,
    quantum_chained_minimum,
    theorem2_bound,
    validate_behavior,
)
from .qudit_graph import QuditStabilizerGroup, lemma3_pattern_scan, verify_graph_certificate
from .sim import MODES, recheck_certificate, verify_mfnl_certificate
from .stabilizer import (
    GroupValidator,
    StabilizerGroup,
    is_gme,
    subspace_dimension,
    validate_and_canonicalize,
)
from .utils import emitters, parsers
from .witness import (
    enumerate_witness_pairs,
    find_all_witnesses,
    protocol_corrections,
    synthesize_protocol,
)

logger = logging.getLogger(__name__)

INPUT_ERRORS = (
    ParseError,
    DomainError,
    DimensionError,
    CapacityError,
    InvalidGroupError,
    SingularMatrix,
    OSError,
    json.JSONDecodeError,
)

FIGURE_COLUMNS = {"fig1": ["N", "n_min", "m"], "fig2": ["m", "p_nl_lower"]}


@dataclass
class RunConfig:
    """Options of one command-line run.

    ``options`` holds the subcommand-specific values (party counts, pair
    specifications, figure ranges).
    """

    command: str
    inputs: list[str] = field(default_factory=list)
    out: str | None = None
    mode: str = "both"
    fidelity_tol: float = FIDELITY_TOL
    workers: int = 1
    seed: int = DEFAULT_SAMPLE_SEED
    sample_cap: int = TABLEAU_BRANCH_CAP
    verbose: int = 0
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.fidelity_tol > 0:
            raise DomainError(f"fidelity tolerance must be positive, got {self.fidelity_tol}")
        if self.workers < 1:
            raise DomainError(f"worker count must be >= 1, got {self.workers}")
        if self.sample_cap < 1:
            raise DomainError(f"sample cap must be >= 1, got {self.sample_cap}")

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> RunConfig:
        common = {"command", "inputs", "out", "mode", "fidelity_tol", "workers", "seed", "sample_cap", "verbose"}
        values = vars(args)
        options = {k: v for k, v in values.items() if k not in common}
        return cls(
            command=args.command,
            inputs=list(getattr(args, "inputs", []) or []),
            out=args.out,
            mode=getattr(args, "mode", "both"),
            fidelity_tol=getattr(args, "fidelity_tol", FIDELITY_TOL),
            workers=args.workers,
            seed=args.seed,
            sample_cap=args.sample_cap,
            verbose=args.verbose,
            options=options,
        )


@dataclass
class Outcome:
    """Artifact and exit status produced by a subcommand."""

    document: Mapping[str, Any] | None
    status: int
    summary: str
    csv_text: str | None = None


# =============================================================================
# Input helpers
# =============================================================================


def _pair(text: str) -> tuple[int, int]:
    try:
        left, right = text.split(",")
        return int(left), int(right)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}") from None


def _single_input(config: RunConfig) -> str:
    if len(config.inputs) != 1:
        raise DomainError(f"{config.command} needs exactly one input file")
    return config.inputs[0]


def _load_group(path: str) -> tuple[StabilizerGroup, list[str]]:
    """Validated qubit group and the dependency warnings raised while building it."""
    stab = parsers.load_stab(path)
    if stab.d != 2:
        raise DomainError(f"{path}: d={stab.d}; this command needs a qubit file")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", UserWarning)
        try:
            group = validate_and_canonicalize(stab.generators)
        except NotAbelian as exc:
            raise ParseError(
                f"{exc} (lines {stab.lines[exc.i - 1]} and {stab.lines[exc.j - 1]})", path=path
            ) from exc
        except InvalidPhase as exc:
            raise ParseError(str(exc), line=stab.lines[exc.i - 1], path=path) from exc
    return group, [str(w.message) for w in caught]


def _group_header(group: StabilizerGroup) -> dict[str, Any]:
    return {
        "n_qubits": group.n_qubits,
        "k": group.k,
        "generators": group.texts(),
        "dropped": list(group.dropped),
    }


# =============================================================================
# Subcommands
# =============================================================================


def _run_validate(config: RunConfig) -> Outcome:
    path = _single_input(config)
    stab = parsers.load_stab(path)
    result = GroupValidator.validate(stab.generators)
    document = {"kind": "validation", **result.to_dict()}
    if result.is_valid and config.options.get("echelon"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            document["echelon"] = validate_and_canonicalize(stab.generators, echelon=True).texts()
    status = EXIT_OK if result.is_valid else EXIT_FAILURE
    summary = (
        f"valid: k={result.details['k']}, subspace dimension {result.details['subspace_dimension']}"
        if result.is_valid
        else f"invalid: {'; '.join(result.errors)}"
    )
    return Outcome(document, status, summary)


def _run_gme(config: RunConfig) -> Outcome:
    group, notes = _load_group(_single_input(config))
    verdict = is_gme(group, workers=config.workers)
    document = {
        "kind": "gme_verdict",
        **_group_header(group),
        "subspace_dimension": subspace_dimension(group),
        "gme": verdict.is_gme,
        **verdict.to_dict(),
        "warnings": notes,
    }
    summary = f"GME: {str(verdict.is_gme).lower()} ({verdict.bipartitions_checked} bipartitions checked)"
    if not verdict.is_gme:
        summary += f", Q={list(verdict.violating_bipartition or ())}"
    return Outcome(document, EXIT_OK if verdict.is_gme else EXIT_FAILURE, summary)


def _run_pattern_scan(path: str, config: RunConfig) -> Outcome:
    stab = parsers.load_stab(path)
    group = QuditStabilizerGroup(stab.d, tuple(stab.generators))
    pairs = (
        [config.options["pair"]]
        if config.options.get("pair")
        else [(a, b) for a in range(1, group.n_sites + 1) for b in range(a + 1, group.n_sites + 1)]
    )
    scans = [lemma3_pattern_scan(group, a, b) for a, b in pairs]
    found = sum(1 for s in scans if s.found)
    document = {
        "kind": "pattern_scan",
        "d": group.d,
        "generators": group.texts(),
        "pairs": [s.to_dict() for s in scans],
    }
    status = EXIT_OK if found == len(scans) else EXIT_FAILURE
    return Outcome(document, status, f"two-site pattern found for {found}/{len(scans)} pairs (d={group.d})")


def _run_witness(config: RunConfig) -> Outcome:
    path = _single_input(config)
    if parsers.load_stab(path).d != 2:
        return _run_pattern_scan(path, config)
    group, notes = _load_group(path)
    witnesses = find_all_witnesses(group, workers=config.workers)
    selected = config.options.get("pair")
    if selected:
        key = (min(selected), max(selected))
        if key not in witnesses:
            raise DomainError(f"pair {selected} outside [1, {group.n_qubits}]")
        witnesses = {key: witnesses[key]}

    entries = []
    for pair, witness in witnesses.items():
        protocol = synthesize_protocol(witness)
        entry: dict[str, Any] = {
            "pair": list(pair),
            "witness": witness.to_dict(),
            "protocol": protocol.to_dict(),
        }
        if protocol.branch_count <= config.sample_cap:
            entry["corrections"] = [
                {"outcomes": {str(a): b for a, b in outcomes.items()}, **rule.to_dict()}
                for outcomes, rule in protocol_corrections(protocol)
            ]
        if config.options.get("oracle"):
            if group.k > min(ENUMERATION_MAX_K, 12):
                raise CapacityError("oracle generator count", 12, group.k)
            entry["oracle_confirms"] = bool(
                enumerate_witness_pairs(group, pair[0], pair[1], first_only=True)
            )
        entries.append(entry)
    document = {
        "kind": "witness_certificate",
        **_group_header(group),
        "pairs": entries,
        "warnings": notes,
    }
    return Outcome(document, EXIT_OK, f"witnesses found for {len(entries)} pairs")


def _run_verify(config: RunConfig) -> Outcome:
    path = _single_input(config)
    if config.options.get("recheck"):
        with open(path, encoding="utf-8") as handle:
            document = json.load(handle)
        result = recheck_certificate(document)
        summary = "recheck passed" if result.is_valid else f"recheck failed: {'; '.join(result.errors)}"
        return Outcome(
            {"kind": "recheck", **result.to_dict()},
            EXIT_OK if result.is_valid else EXIT_FAILURE,
            summary,
        )

    group, _ = _load_group(path)
    report = verify_mfnl_certificate(
        group,
        mode=config.mode,
        workers=config.workers,
        sample_cap=config.sample_cap,
        seed=config.seed,
        fidelity_tol=config.fidelity_tol,
        raise_on_failure=False,
    )
    document = report.to_dict(include_branches=not config.options.get("no_branches"))
    branches = sum(p.branch_count for p in report.pairs)
    summary = (
        f"MFNL certificate {'passed' if report.passed else 'FAILED'}: "
        f"{len(report.pairs)} pairs, {branches} branches ({config.mode})"
    )
    return Outcome(document, EXIT_OK if report.passed else EXIT_FAILURE, summary)


def _run_graph(config: RunConfig) -> Outcome:
    graph, d = parsers.load_graph(_single_input(config))
    pair = config.options.get("pair")
    report = verify_graph_certificate(
        graph,
        d,
        pairs=[pair] if pair else None,
        fidelity_tol=config.fidelity_tol,
        workers=config.workers,
        raise_on_failure=False,
    )
    document = report.to_dict(include_branches=not config.options.get("no_branches"))
    summary = (
        f"graph certificate {'passed' if report.passed else 'FAILED'}: "
        f"{len(report.pairs)} edges, d={d}, connected={str(report.connected).lower()}"
    )
    return Outcome(document, EXIT_OK if report.passed else EXIT_FAILURE, summary)


def _run_chained(config: RunConfig) -> Outcome:
    behavior_path = config.options.get("behavior")
    if behavior_path:
        behavior = parsers.load_behavior(behavior_path)
        validation = validate_behavior(behavior)
        document: dict[str, Any] = {
            "kind": "behavior_chained",
            "validation": validation.to_dict(),
        }
        if not validation.is_valid:
            return Outcome(document, EXIT_FAILURE, f"invalid behavior: {'; '.join(validation.errors)}")
        value = chained_value(behavior, behavior.inputs, behavior.outputs)
        document.update(
            {
                "n": behavior.inputs,
                "d": behavior.outputs,
                "value": value,
                "classical_bound": behavior.outputs - 1,
                "violates_local_bound": value < behavior.outputs - 1,
            }
        )
        return Outcome(document, EXIT_OK, f"I_{behavior.inputs},{behavior.outputs} = {value:.6f}")

    low = config.options.get("n") or 2
    high = config.options.get("n_max") or low
    if high < low:
        raise DomainError(f"--n-max {high} is below --n {low}")
    rows = []
    for n in range(low, high + 1):
        row = quantum_chained_minimum(n, config.options.get("d") or 2).to_dict()
        if config.options.get("grid"):
            row["grid_value"] = chained_grid_minimum(n)
        rows.append(row)
    document = {"kind": "chained_minimum", "rows": rows}
    return Outcome(document, EXIT_OK, f"chained minimum for n={low}..{high}: {rows[-1]['value']:.6f} at n={high}")


def _run_bound(config: RunConfig) -> Outcome:
    n = config.options["n"]
    d = config.options.get("d") or 2
    if config.options.get("chained_values"):
        result = bound_from_chained_values(parsers.load_chained_values(config.options["chained_values"]), n, d)
    elif config.options.get("pairs_file"):
        result = theorem2_bound(parsers.load_pair_bounds(config.options["pairs_file"]), n)
    elif config.options.get("pairs"):
        result = theorem2_bound(parsers.parse_pair_spec(config.options["pairs"], n), n)
    else:
        raise DomainError("bound needs --pairs, --pairs-file or --chained-values")
    document = {"kind": "nonlocality_bound", **result.to_dict(), "vacuous": result.vacuous}
    summary = f"p_NL >= {result.clamped:.6f} (raw {result.raw:.6f})"
    return Outcome(document, EXIT_FAILURE if result.vacuous else EXIT_OK, summary)


def _run_thresholds(config: RunConfig) -> Outcome:
    result = gmnl_threshold(config.options["n"], config.options.get("d") or 2)
    document = {"kind": "gmnl_threshold", **result.to_dict()}
    summary = (
        f"N={result.n_parties}: pair requirement {result.pair_requirement:.6f}, "
        f"n_min={result.n_min}, m={result.m}"
    )
    return Outcome(document, EXIT_OK, summary)


def _run_figures(config: RunConfig) -> Outcome:
    which = config.options["which"]
    rows = figure_data(
        which,
        n_range=config.options.get("range"),
        n_parties=config.options.get("parties") or 5,
        workers=config.workers,
    )
    csv_text = emitters.to_csv(rows, FIGURE_COLUMNS[which])
    return Outcome(None, EXIT_OK, f"{which}: {len(rows)} rows", csv_text=csv_text)


COMMANDS: dict[str, Callable[[RunConfig], Outcome]] = {
    "validate": _run_validate,
    "gme": _run_gme,
    "witness": _run_witness,
    "verify": _run_verify,
    "graph": _run_graph,
    "chained": _run_chained,
    "bound": _run_bound,
    "thresholds": _run_thresholds,
    "figures": _run_figures,
}


# =============================================================================
# Entry points
# =============================================================================


def _emit(outcome: Outcome, config: RunConfig) -> None:
    if outcome.csv_text is not None:
        if config.out and config.out != "-":
            with open(config.out, "w", encoding="utf-8") as handle:
                handle.write(outcome.csv_text)
        else:
            sys.stdout.write(outcome.csv_text)
    elif outcome.document is not None:
        emitters.write_json(outcome.document, config.out)
    print(outcome.summary, file=sys.stderr)


def run(config: RunConfig) -> int:
    """Execute one subcommand and write its artifact; returns the exit status."""
    try:
        outcome = COMMANDS[config.command](config)
    except NotGME as exc:
        document = {
            "kind": "not_gme",
            "schema_version": SCHEMA_VERSION,
            "violating_bipartition": list(exc.bipartition) if exc.bipartition else None,
            "pair": list(exc.pair) if exc.pair else None,
        }
        outcome = Outcome(document, EXIT_FAILURE, str(exc))
    except NoTwoSiteWitness as exc:
        document = {
            "kind": "no_witness",
            "schema_version": SCHEMA_VERSION,
            "gme": True,
            "pair": list(exc.pair),
        }
        outcome = Outcome(document, EXIT_FAILURE, str(exc))
    except CertificateFailure as exc:
        report = exc.report.to_dict() if exc.report is not None else {"kind": "certificate_failure"}
        outcome = Outcome(report, EXIT_FAILURE, f"certificate failure: {exc}")
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except StabilizerNonlocalityError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        document = {
            "kind": "failure",
            "schema_version": SCHEMA_VERSION,
            "error": type(exc).__name__,
            "message": str(exc),
        }
        outcome = Outcome(document, EXIT_FAILURE, f"failure: {exc}")
    _emit(outcome, config)
    return outcome.status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    common.add_argument("--out", default=None, help="artifact path (default: stdout)")
    common.add_argument("--workers", type=int, default=1, help="worker threads")
    common.add_argument("--seed", type=int, default=DEFAULT_SAMPLE_SEED, help="seed for sampled tableau branches")
    common.add_argument(
        "--sample-cap", type=int, default=TABLEAU_BRANCH_CAP, help="per-pair branch count above which tableau branches are sampled"
    )

    parser = argparse.ArgumentParser(
        prog="stabilizer-nonlocality",
        description="Certify genuine multipartite nonlocality of stabilizer subspaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="group validity report")
    p.add_argument("inputs", nargs=1, metavar="FILE.stab")
    p.add_argument("--echelon", action="store_true", help="also print the reduced echelon generators")

    p = sub.add_parser("gme", parents=[common], help="GME verdict")
    p.add_argument("inputs", nargs=1, metavar="FILE.stab")

    p = sub.add_parser("witness", parents=[common], help="witness pairs and protocols for all party pairs")
    p.add_argument("inputs", nargs=1, metavar="FILE.stab")
    p.add_argument("--pair", type=_pair, default=None, help="restrict to one pair 'a,b'")
    p.add_argument("--oracle", action="store_true", help="cross-check with the exhaustive element-pair scan")

    p = sub.add_parser("verify", parents=[common], help="full MFNL certificate")
    p.add_argument("inputs", nargs=1, metavar="FILE")
    p.add_argument("--mode", choices=MODES, default="both")
    p.add_argument("--tol-fidelity", dest="fidelity_tol", type=float, default=FIDELITY_TOL)
    p.add_argument("--recheck", action="store_true", help="FILE is a JSON certificate to re-validate")
    p.add_argument("--no-branches", action="store_true", help="omit per-branch records")

    p = sub.add_parser("graph", parents=[common], help="qudit graph-state edge protocols")
    p.add_argument("inputs", nargs=1, metavar="FILE.graph")
    p.add_argument("--pair", type=_pair, default=None)
    p.add_argument("--tol-fidelity", dest="fidelity_tol", type=float, default=FIDELITY_TOL)
    p.add_argument("--no-branches", action="store_true")

    p = sub.add_parser("chained", parents=[common], help="quantum chained minimum or a behavior's chained value")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--grid", action="store_true", help="add the exhaustive grid minimum")
    p.add_argument("--behavior", default=None, metavar="FILE.csv")

    p = sub.add_parser("bound", parents=[common], help="aggregate nonlocality-content bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--pairs", default=None, help="'all=p' or 'a-b=p,...'")
    p.add_argument("--pairs-file", default=None, metavar="FILE.csv")
    p.add_argument("--chained-values", default=None, metavar="FILE.csv")

    p = sub.add_parser("thresholds", parents=[common], help="pair requirement and settings count")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=None)

    p = sub.add_parser("figures", parents=[common], help="figure tables as CSV")
    p.add_argument("which", choices=sorted(FIGURE_COLUMNS))
    p.add_argument("--range", type=_pair, default=None, help="inclusive 'low,high'")
    p.add_argument("--parties", type=int, default=None)
    return parser


def _configure_logging(verbose: int) -> None:
    if verbose:
        level = logging.DEBUG if verbose > 1 else logging.INFO
        logging.getLogger("stabilizer_nonlocality").setLevel(level)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT_ERROR
    _configure_logging(args.verbose)
    try:
        config = RunConfig.from_namespace(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
