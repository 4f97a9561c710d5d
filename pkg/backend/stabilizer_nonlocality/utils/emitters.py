"""
Writers for JSON artifacts and CSV tables.

JSON is emitted with sorted keys and two-space indentation plus a trailing
newline, so artifacts are byte-identical across runs and worker counts.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..constants import SCHEMA_VERSION
from ..nonlocality import Behavior
from .parsers import BEHAVIOR_COLUMNS


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def to_json(document: Mapping[str, Any]) -> str:
    """Serialize with ``schema_version`` filled in when missing."""
    data: Dict[str, Any] = dict(document)
    data.setdefault("schema_version", SCHEMA_VERSION)
    return json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n"


def write_json(document: Mapping[str, Any], path: Optional[str | Path] = None) -> str:
    """Write to ``path``, or stdout when it is None or ``-``; returns the text."""
    text = to_json(document)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
    return text


def to_csv(rows: Sequence[Mapping[str, Any]], columns: List[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({name: row[name] for name in columns})
    return buffer.getvalue()


def behavior_to_csv(b: Behavior) -> str:
    rows = [dict(zip(BEHAVIOR_COLUMNS, record)) for record in b.to_records()]
    return to_csv(rows, BEHAVIOR_COLUMNS)


__all__ = ["to_json", "write_json", "to_csv", "behavior_to_csv"]
