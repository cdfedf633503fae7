"""Canonical JSON records and CSV export.

Floats are written as the shortest decimal that round-trips to the same
64-bit value (Python's ``repr``).  ``-inf`` becomes the string ``"-inf"`` and
``+inf`` (only ever a margin, never a function value) the string ``"inf"``.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import json
import math
from typing import Any, Iterable, Optional, Sequence

SCHEMA_VERSION = 1


def _plain(obj: Any) -> Any:
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):     # numpy scalars
        return _plain(obj.item())
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=False,
                      ensure_ascii=False)


def config_digest(config_dict: dict) -> str:
    """SHA-256 of the canonical config, ignoring the seed and the output path."""
    d = {k: v for k, v in config_dict.items() if k not in ("seed", "output")}
    return hashlib.sha256(canonical_json(d).encode("utf-8")).hexdigest()


def make_record(config_dict: dict, seed: int, payload: dict, timestamp: Optional[str] = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config_digest": config_digest(config_dict),
        "timestamp": timestamp,
        "rng_seed": seed,
        "payload": payload,
    }


def now_iso() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def to_jsonl(records: Iterable[dict]) -> str:
    return "".join(canonical_json(r) + "\n" for r in records)


def fmt_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "-inf" if v < 0 else "inf"
        if math.isnan(v):
            return ""
        return repr(v)
    if isinstance(v, (list, tuple, dict)):
        return canonical_json(v)
    return str(v)


def emit_csv(records: Sequence[dict], columns: Sequence[str]) -> str:
    """Flatten homogeneous records into CSV text.

    List-valued columns are expanded into one row per element (they must have
    equal lengths within a record); scalars are repeated on every row.  A
    requested ``j`` column missing from the records is the row index.
    """
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    if not records:
        return out.getvalue()
    keys = set(records[0])
    for r in records[1:]:
        if set(r) != keys:
            raise ValueError("records are not homogeneous")
    for col in columns:
        if col not in keys and col != "j":
            raise ValueError(f"column {col!r} not in records")
    for r in records:
        lists = {c: r[c] for c in columns if c in r and isinstance(r[c], (list, tuple))}
        lengths = {len(v) for v in lists.values()}
        if len(lengths) > 1:
            raise ValueError("list-valued columns differ in length")
        nrows = lengths.pop() if lengths else 1
        for i in range(nrows):
            row = []
            for c in columns:
                if c in lists:
                    row.append(fmt_cell(lists[c][i]))
                elif c in r:
                    row.append(fmt_cell(r[c]))
                else:
                    row.append(str(i))
            w.writerow(row)
    return out.getvalue()
