"""Report envelopes, a fixed-precision JSON emitter and CSV flattening."""

from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone
from typing import Any, Sequence

import numpy as np

from . import __version__
from .errors import InternalInvariantError
from .suite import InequalityReport, summarize

SCHEMA_VERSION = 1
TOOL_NAME = "steklab"

REPORT_COLUMNS = (
    "name",
    "relation",
    "lhs",
    "rhs",
    "slack",
    "relative_slack",
    "pass",
    "sharp",
    "tolerance",
    "sharp_tolerance",
    "params",
    "inputs",
)


def format_float(x: float) -> str:
    """17 significant digits, always recognizable as a float; non-finite as strings."""
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _plain(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, tuple):
        return list(obj)
    return obj


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with every float printed via :func:`format_float`."""
    out: list[str] = []

    def emit(o, level):
        o = _plain(o)
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if o is None or isinstance(o, (bool, str)):
            out.append(json.dumps(o))
        elif isinstance(o, int):
            out.append(str(o))
        elif isinstance(o, float):
            out.append(format_float(o))
        elif isinstance(o, dict):
            if not o:
                out.append("{}")
                return
            out.append("{\n")
            for i, (k, v) in enumerate(o.items()):
                out.append(f"{pad}{json.dumps(str(k))}: ")
                emit(v, level + 1)
                out.append(",\n" if i < len(o) - 1 else "\n")
            out.append(end + "}")
        elif isinstance(o, list):
            if not o:
                out.append("[]")
                return
            if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in o):
                out.append("[" + ", ".join(format_float(v) if isinstance(v, float) else str(v) for v in o) + "]")
                return
            out.append("[\n")
            for i, v in enumerate(o):
                out.append(pad)
                emit(v, level + 1)
                out.append(",\n" if i < len(o) - 1 else "\n")
            out.append(end + "]")
        else:
            raise TypeError(f"cannot serialize {type(o).__name__}")

    emit(obj, 0)
    return "".join(out) + "\n"


def envelope(
    command: str,
    config: dict,
    reports: Sequence[dict],
    summary: dict,
    timestamp: bool = True,
) -> dict:
    """Versioned output record. ``summary`` must count the entries of ``reports``."""
    if summary.get("total") != len(reports):
        raise InternalInvariantError("envelope summary does not match its report list")
    env = {
        "schema_version": SCHEMA_VERSION,
        "tool": TOOL_NAME,
        "version": __version__,
    }
    if timestamp:
        env["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    env["command"] = command
    env["config"] = config
    env["reports"] = list(reports)
    env["summary"] = {k: summary[k] for k in ("total", "passed", "sharp")}
    return env


def inequality_envelope(command: str, config: dict, reports: Sequence[InequalityReport], timestamp: bool = True) -> dict:
    return envelope(command, config, [r.to_dict() for r in reports], summarize(reports), timestamp)


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v).strip('"')
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"), default=str)
    return str(v)


def rows_to_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def reports_to_csv(reports: Sequence[InequalityReport]) -> str:
    """One row per report; ``params`` as compact JSON, ``inputs`` as ``kind:source:label`` joined by ``;``."""
    rows = []
    for r in reports:
        inputs = ";".join(f"{p['kind']}:{p['source']}:{p['label']}" for p in r.inputs)
        rows.append([
            r.name, r.relation, r.lhs, r.rhs, r.slack, r.relative_slack, r.passed,
            r.sharp, r.tolerance, r.sharp_tolerance, r.params, inputs,
        ])
    return rows_to_csv(REPORT_COLUMNS, rows)
