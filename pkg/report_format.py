#!/usr/bin/env python3
"""
Output formats for the command line: the JSON envelope, CSV tables and
approximate plot samples
"""

import csv
import dataclasses
import io
import json
import math
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

SCHEMA_VERSION = "1"


def format_rational(value) -> Optional[str]:
    """'p/q' for non-integers, 'p' for integers, 'inf' for the infinite slope"""
    if value is None:
        return None
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return "inf"
        raise TypeError(f"refusing to serialize an approximate value {value!r} as a rational")
    return str(Fraction(value))


def to_jsonable(obj: Any) -> Any:
    """Recursively turn results into plain JSON values with exact rationals as strings"""
    if isinstance(obj, Enum):
        return obj.value
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, Fraction, float)):
        if isinstance(obj, int):
            return obj
        return format_rational(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, tuple) and hasattr(obj, "_fields"):
        return {name: to_jsonable(getattr(obj, name)) for name in obj._fields}
    if isinstance(obj, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def build_envelope(command: str, inputs: Dict[str, Any], results: Any,
                   warnings: Optional[List[str]] = None) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": to_jsonable(inputs),
        "results": to_jsonable(results),
        "warnings": list(warnings or []),
    }


def dump_json(envelope: Dict[str, Any]) -> str:
    """Byte-stable JSON: sorted keys, fixed indent, trailing newline"""
    return json.dumps(envelope, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if x is None else (x if isinstance(x, str) else to_jsonable(x)) for x in row])
    return buffer.getvalue()


def _approx(x: float) -> str:
    return f"{x:.12g}"


def plot_csv(sampled: Iterable[Tuple[int, List[Tuple[float, float]]]]) -> str:
    """
    Rows of (wall_id, beta, alpha) for external plotting. Every sample is a
    float, so every row is tagged approx.
    """
    rows = []
    for wall_id, points in sampled:
        for beta, alpha in points:
            rows.append([str(wall_id), _approx(beta), _approx(alpha), "approx"])
    return write_csv(["wall_id", "beta", "alpha", "precision"], rows)
