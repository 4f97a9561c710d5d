"""
Internal helper functions for the utils module.

These functions are not part of the public API and should not be
imported directly by users.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

from ..exceptions import ParseError


def _iter_content_lines(text: str) -> Iterator[Tuple[int, str]]:
    """Yield (1-based line number, content) with ``#`` comments and blanks removed."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield number, content


def _read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _read_csv_rows(
    text: str, columns: List[str], path: Optional[str] = None
) -> List[Tuple[int, dict]]:
    """
    Parse CSV text whose header must equal ``columns``.

    Returns:
        (line number, row dict) pairs for every data row.
    """
    reader = csv.DictReader(io.StringIO(text))
    header = [name.strip() for name in (reader.fieldnames or [])]
    if header != columns:
        raise ParseError(
            f"expected header {','.join(columns)}, got {','.join(header) or 'nothing'}",
            line=1,
            path=path,
        )
    rows = []
    for row in reader:
        if not any((value or "").strip() for value in row.values()):
            continue
        rows.append((reader.line_num, {k.strip(): (v or "").strip() for k, v in row.items()}))
    return rows


def _as_int(value: str, name: str, line: int, path: Optional[str]) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{name} must be an integer, got {value!r}", line=line, path=path) from None


def _as_float(value: str, name: str, line: int, path: Optional[str]) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(f"{name} must be a number, got {value!r}", line=line, path=path) from None
