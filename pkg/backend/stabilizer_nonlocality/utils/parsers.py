"""
Readers for the command-line input formats.

- ``.stab``: optional ``d=<int>`` header, then one generator per line
- ``.graph``: header ``d=<int>; n=<int>``, then ``u v [multiplicity]`` lines
- pair-bounds CSV: ``alpha,alpha_bar,p_lower``
- chained-values CSV: ``alpha,alpha_bar,chained_value``
- behavior CSV: ``x,y,a,b,p`` with 1-based inputs and 0-based outputs

``#`` starts a comment in ``.stab`` and ``.graph`` files. Every error is a
ParseError carrying the file and 1-based line.
"""

from __future__ import annotations

import dataclasses
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..data_models import PairBound
from ..exceptions import DomainError, ParseError
from ..nonlocality import Behavior
from ..pauli import PauliOperator, parse_pauli
from ..qudit_graph import Multigraph
from ._internal import _as_float, _as_int, _iter_content_lines, _read_csv_rows, _read_text

_DIMENSION_HEADER = re.compile(r"d\s*=\s*(\d+)$")
_GRAPH_HEADER = re.compile(r"(\w+)\s*=\s*(\d+)$")

PAIR_BOUND_COLUMNS = ["alpha", "alpha_bar", "p_lower"]
CHAINED_VALUE_COLUMNS = ["alpha", "alpha_bar", "chained_value"]
BEHAVIOR_COLUMNS = ["x", "y", "a", "b", "p"]


@dataclasses.dataclass
class StabFile:
    """Parsed ``.stab`` contents; ``lines`` maps generators back to file lines."""

    d: int
    generators: List[PauliOperator]
    lines: List[int]
    path: Optional[str] = None


def parse_stab_text(text: str, path: Optional[str] = None) -> StabFile:
    """
    Parse ``.stab`` text.

    Example:
        >>> parse_stab_text("XX\\nZZ\\n").generators[1].to_text()
        '+ZZ'
    """
    d = 2
    generators: List[PauliOperator] = []
    lines: List[int] = []
    for number, content in _iter_content_lines(text):
        header = _DIMENSION_HEADER.match(content)
        if header:
            if generators:
                raise ParseError("the d= header must precede the generators", line=number, path=path)
            d = int(header.group(1))
            if d < 2:
                raise ParseError(f"local dimension must be >= 2, got {d}", line=number, path=path)
            continue
        try:
            generators.append(parse_pauli(content, d))
        except ParseError as exc:
            raise exc.located(line=number, path=path) from None
        lines.append(number)
    if not generators:
        raise ParseError("no generators found", path=path)
    return StabFile(d=d, generators=generators, lines=lines, path=path)


def load_stab(path: str | Path) -> StabFile:
    return parse_stab_text(_read_text(path), path=str(path))


def parse_graph_text(text: str, path: Optional[str] = None) -> Tuple[Multigraph, int]:
    """Parse ``.graph`` text into the multigraph and its local dimension."""
    content_lines = list(_iter_content_lines(text))
    if not content_lines:
        raise ParseError("missing header 'd=<int>; n=<int>'", line=1, path=path)
    header_line, header = content_lines[0]
    values: Dict[str, int] = {}
    for part in header.split(";"):
        match = _GRAPH_HEADER.match(part.strip())
        if not match:
            raise ParseError(f"malformed header field {part.strip()!r}", line=header_line, path=path)
        values[match.group(1)] = int(match.group(2))
    if set(values) != {"d", "n"}:
        raise ParseError("header needs exactly d and n", line=header_line, path=path)
    d, n = values["d"], values["n"]

    edges = []
    for number, content in content_lines[1:]:
        fields = content.split()
        if len(fields) not in (2, 3):
            raise ParseError("edge lines are 'u v [multiplicity]'", line=number, path=path)
        u = _as_int(fields[0], "u", number, path)
        v = _as_int(fields[1], "v", number, path)
        multiplicity = _as_int(fields[2], "multiplicity", number, path) if len(fields) == 3 else 1
        if not (1 <= u <= n and 1 <= v <= n) or u == v or multiplicity < 0:
            raise ParseError(f"invalid edge ({u}, {v}, {multiplicity}) for n={n}", line=number, path=path)
        edges.append((u, v, multiplicity))
    try:
        graph = Multigraph.from_edges(n, edges)
    except DomainError as exc:
        raise ParseError(str(exc), line=header_line, path=path) from None
    return graph, d


def load_graph(path: str | Path) -> Tuple[Multigraph, int]:
    return parse_graph_text(_read_text(path), path=str(path))


def parse_pair_bounds_csv(text: str, path: Optional[str] = None) -> List[PairBound]:
    bounds = []
    for number, row in _read_csv_rows(text, PAIR_BOUND_COLUMNS, path):
        try:
            bounds.append(
                PairBound(
                    alpha=_as_int(row["alpha"], "alpha", number, path),
                    alpha_bar=_as_int(row["alpha_bar"], "alpha_bar", number, path),
                    p_lower=_as_float(row["p_lower"], "p_lower", number, path),
                )
            )
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), line=number, path=path) from None
    return bounds


def parse_chained_values_csv(
    text: str, path: Optional[str] = None
) -> Dict[Tuple[int, int], float]:
    values: Dict[Tuple[int, int], float] = {}
    for number, row in _read_csv_rows(text, CHAINED_VALUE_COLUMNS, path):
        alpha = _as_int(row["alpha"], "alpha", number, path)
        alpha_bar = _as_int(row["alpha_bar"], "alpha_bar", number, path)
        key = (min(alpha, alpha_bar), max(alpha, alpha_bar))
        if alpha == alpha_bar or key in values:
            raise ParseError(f"pair ({alpha}, {alpha_bar}) is invalid or repeated", line=number, path=path)
        values[key] = _as_float(row["chained_value"], "chained_value", number, path)
    return values


def parse_behavior_csv(text: str, path: Optional[str] = None) -> Behavior:
    records = []
    for number, row in _read_csv_rows(text, BEHAVIOR_COLUMNS, path):
        records.append(
            (
                _as_int(row["x"], "x", number, path),
                _as_int(row["y"], "y", number, path),
                _as_int(row["a"], "a", number, path),
                _as_int(row["b"], "b", number, path),
                _as_float(row["p"], "p", number, path),
            )
        )
    if not records:
        raise ParseError("behavior table has no rows", path=path)
    if any(r[0] < 1 or r[1] < 1 or r[2] < 0 or r[3] < 0 for r in records):
        raise ParseError("inputs are 1-based and outputs 0-based", path=path)
    return Behavior.from_records(records)


def parse_pair_spec(spec: str, n_parties: int) -> Dict[Tuple[int, int], float]:
    """
    Parse ``all=<p>`` or comma-separated ``a-b=<p>`` items.

    Example:
        >>> len(parse_pair_spec("all=0.874", 5))
        10
    """
    values: Dict[Tuple[int, int], float] = {}
    for item in spec.split(","):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep:
            raise ParseError(f"pair item {item!r} needs '='")
        try:
            value = float(raw)
        except ValueError:
            raise ParseError(f"pair value {raw!r} is not a number") from None
        if key == "all":
            for a in range(1, n_parties + 1):
                for b in range(a + 1, n_parties + 1):
                    values[(a, b)] = value
            continue
        left, dash, right = key.partition("-")
        if not dash or not left.strip().isdigit() or not right.strip().isdigit():
            raise ParseError(f"pair key {key!r} must be 'all' or 'a-b'")
        a, b = int(left), int(right)
        values[(min(a, b), max(a, b))] = value
    return values


def load_pair_bounds(path: str | Path) -> List[PairBound]:
    return parse_pair_bounds_csv(_read_text(path), path=str(path))


def load_chained_values(path: str | Path) -> Dict[Tuple[int, int], float]:
    return parse_chained_values_csv(_read_text(path), path=str(path))


def load_behavior(path: str | Path) -> Behavior:
    return parse_behavior_csv(_read_text(path), path=str(path))


__all__ = [
    "StabFile",
    "PAIR_BOUND_COLUMNS",
    "CHAINED_VALUE_COLUMNS",
    "BEHAVIOR_COLUMNS",
    "parse_stab_text",
    "load_stab",
    "parse_graph_text",
    "load_graph",
    "parse_pair_bounds_csv",
    "parse_chained_values_csv",
    "parse_behavior_csv",
    "parse_pair_spec",
    "load_pair_bounds",
    "load_chained_values",
    "load_behavior",
]
