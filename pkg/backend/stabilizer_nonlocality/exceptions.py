"""
Error types raised across the package.

Input problems (malformed text, wrong shapes, values outside a domain,
exceeded caps) are kept apart from certified negative answers (a group that
is not GME, a protocol branch that fails), so the command line can map them
to different exit codes.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any


class StabilizerNonlocalityError(Exception):
    """Base class for every error raised by this package."""


# =============================================================================
# Input errors
# =============================================================================


class ParseError(StabilizerNonlocalityError, ValueError):
    """Malformed operator text, `.stab`, `.graph` or CSV input.

    Columns and lines are 1-based.
    """

    def __init__(
        self,
        message: str,
        column: int | None = None,
        line: int | None = None,
        path: str | None = None,
    ) -> None:
        self.message = message
        self.column = column
        self.line = line
        self.path = path
        super().__init__(self._format())

    def _format(self) -> str:
        where = []
        if self.path is not None:
            where.append(str(self.path))
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        if not where:
            return self.message
        return f"{', '.join(where)}: {self.message}"

    def located(self, line: int | None = None, path: str | None = None) -> ParseError:
        """Return a copy carrying file and line information."""
        return ParseError(
            self.message,
            column=self.column,
            line=line if line is not None else self.line,
            path=path if path is not None else self.path,
        )


class DimensionError(StabilizerNonlocalityError, ValueError):
    """Operands with mismatched site counts, local dimensions or table shapes."""


class DomainError(StabilizerNonlocalityError, ValueError):
    """An argument outside the domain of an operation."""


class CapacityError(StabilizerNonlocalityError):
    """A size cap was exceeded."""

    def __init__(self, cap_name: str, cap: int, size: int) -> None:
        self.cap_name = cap_name
        self.cap = cap
        self.size = size
        super().__init__(f"{cap_name} exceeded: size {size} > cap {cap}")


class SingularMatrix(StabilizerNonlocalityError, ValueError):
    """A basis change matrix is not invertible over GF(2)."""


# =============================================================================
# Group validity
# =============================================================================


class InvalidGroupError(StabilizerNonlocalityError):
    """Generators that do not define a valid stabilizer group."""


class NotAbelian(InvalidGroupError):
    """Generators i and j (1-based) anticommute."""

    def __init__(self, i: int, j: int) -> None:
        self.i = i
        self.j = j
        super().__init__(f"generators {i} and {j} do not commute")


class MinusIdentity(InvalidGroupError):
    """A product of generators equals minus the identity."""

    def __init__(self, indices: Sequence[int] = ()) -> None:
        self.indices = tuple(indices)
        detail = f" (product of generators {list(self.indices)})" if self.indices else ""
        super().__init__(f"-I is contained in the group{detail}")


class InvalidPhase(InvalidGroupError):
    """Generator i (1-based) is not Hermitian."""

    def __init__(self, i: int) -> None:
        self.i = i
        super().__init__(f"generator {i} is not Hermitian")


# =============================================================================
# Certified negative answers
# =============================================================================


class NotGME(StabilizerNonlocalityError):
    """The stabilizer subspace is not genuinely multipartite entangled."""

    def __init__(
        self,
        bipartition: Sequence[int] | None = None,
        pair: tuple[int, int] | None = None,
    ) -> None:
        self.bipartition = tuple(bipartition) if bipartition is not None else None
        self.pair = pair
        parts = []
        if pair is not None:
            parts.append(f"no witness for pair {pair}")
        if self.bipartition is not None:
            parts.append(f"violating bipartition Q={list(self.bipartition)}")
        super().__init__("not GME: " + "; ".join(parts) if parts else "not GME")


class NoTwoSiteWitness(StabilizerNonlocalityError):
    """The group is GME, yet no element pair anticommutes on exactly this pair of sites.

    Bipartite entanglement across every cut does not guarantee a two-site
    witness for every pair once N >= 6.
    """

    def __init__(self, pair: tuple[int, int]) -> None:
        self.pair = pair
        super().__init__(f"GME, but no two-site witness for pair {pair}")


class InvalidWitness(StabilizerNonlocalityError):
    """A witness pair or post-measurement pair breaks the two-site pattern."""


class ZeroProbability(StabilizerNonlocalityError):
    """A measurement branch has probability zero."""

    def __init__(self, outcomes: dict[int, int], probability: float) -> None:
        self.outcomes = dict(outcomes)
        self.probability = probability
        super().__init__(f"outcome {self.outcomes} has probability {probability:.3e}")


class ContradictionError(StabilizerNonlocalityError):
    """A forced outcome contradicts a deterministic measurement."""

    def __init__(self, site: int, forced: int, determined: int) -> None:
        self.site = site
        self.forced = forced
        self.determined = determined
        super().__init__(
            f"site {site}: forced outcome {forced} but the state fixes outcome {determined}"
        )


class CertificateFailure(StabilizerNonlocalityError):
    """A protocol branch failed verification."""

    def __init__(
        self,
        message: str,
        pair: tuple[int, int] | None = None,
        outcomes: dict[int, int] | None = None,
        diagnostics: dict[str, Any] | None = None,
        report: Any = None,
    ) -> None:
        self.pair = pair
        self.outcomes = dict(outcomes) if outcomes is not None else None
        self.diagnostics = dict(diagnostics or {})
        self.report = report
        super().__init__(message)


class ConvergenceError(StabilizerNonlocalityError):
    """The chained optimizer disagrees with its analytic value."""


__all__ = [
    "StabilizerNonlocalityError",
    "ParseError",
    "DimensionError",
    "DomainError",
    "CapacityError",
    "SingularMatrix",
    "InvalidGroupError",
    "NotAbelian",
    "MinusIdentity",
    "InvalidPhase",
    "NotGME",
    "NoTwoSiteWitness",
    "InvalidWitness",
    "ZeroProbability",
    "ContradictionError",
    "CertificateFailure",
    "ConvergenceError",
]
