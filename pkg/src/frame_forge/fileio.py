"""Canonical JSON frame files, structured reports and CSV bound tables.

Frame files have the fixed top-level field order ``format_version, m, n,
real_flag, meta, data``; ``data`` lists the entries row-major, complex ones
as ``[re, im]`` pairs and real ones bare.  Floats are written with Python's
shortest round-trip repr and meta keys are sorted, so loading a file and
saving it again reproduces it byte for byte.
"""
from __future__ import annotations

import io
import json
import math
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .coherence import BoundTable
from .errors import DomainError, FrameForgeError
from .frame import Frame

FORMAT_VERSION = 1
_FIELDS = ("format_version", "m", "n", "real_flag", "meta", "data")


class FrameFileError(FrameForgeError, ValueError):
    """A frame file is malformed or cannot be read."""


def _canonical(obj):
    if isinstance(obj, Mapping):
        return {str(k): _canonical(obj[k]) for k in sorted(obj, key=str)}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _canonical(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _dumps(obj) -> str:
    return json.dumps(_canonical(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def dumps_frame(frame: Frame) -> str:
    F = frame.entries
    flat = F.ravel(order="C")
    if frame.real_flag:
        data = [float(v) for v in flat]
    else:
        data = [[float(v.real), float(v.imag)] for v in flat]
    header = {
        "format_version": FORMAT_VERSION,
        "m": frame.m,
        "n": frame.n,
        "real_flag": frame.real_flag,
        "meta": frame.meta,
    }
    lines = [f'"{k}":{_dumps(header[k])}' for k in _FIELDS[:-1]]
    lines.append(f'"data":{_dumps(data)}')
    return "{\n" + ",\n".join(lines) + "\n}\n"


def save_frame(frame: Frame, path) -> None:
    Path(path).write_text(dumps_frame(frame), encoding="utf-8", newline="\n")


def loads_frame(text: str) -> Frame:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameFileError(f"frame file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or list(doc) != list(_FIELDS):
        raise FrameFileError(f"frame file must have exactly the fields {', '.join(_FIELDS)} in that order")
    if doc["format_version"] != FORMAT_VERSION:
        raise FrameFileError(f"unsupported format_version {doc['format_version']!r}")
    m, n, real = doc["m"], doc["n"], doc["real_flag"]
    if not (isinstance(m, int) and isinstance(n, int) and m >= 1 and n >= 1 and isinstance(real, bool)):
        raise FrameFileError("m, n must be positive integers and real_flag a boolean")
    if not isinstance(doc["meta"], dict):
        raise FrameFileError("meta must be an object")
    data = doc["data"]
    if not isinstance(data, list) or len(data) != m * n:
        raise FrameFileError(f"data must list m*n = {m * n} entries")
    try:
        if real:
            arr = np.array(data, dtype=np.float64)
            ok = arr.shape == (m * n,)
        else:
            pairs = np.array(data, dtype=np.float64)
            ok = pairs.shape == (m * n, 2)
            arr = pairs[:, 0] + 1j * pairs[:, 1] if ok else None
    except (TypeError, ValueError):
        ok = False
    if not ok:
        kind = "bare numbers" if real else "[re, im] pairs"
        raise FrameFileError(f"data entries must be {kind}")
    try:
        return Frame(arr.reshape(m, n), doc["meta"])
    except DomainError as exc:
        raise FrameFileError(f"frame file holds an invalid frame: {exc}") from None


def load_frame(path) -> Frame:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FrameFileError(f"cannot read {path}: {exc.strerror or exc}") from None
    return loads_frame(text)


def dumps_report(report: Mapping[str, Any]) -> str:
    return json.dumps(_canonical(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def save_report(report: Mapping[str, Any], path) -> None:
    Path(path).write_text(dumps_report(report), encoding="utf-8", newline="\n")


def format_table(rows, headers=("quantity", "value")) -> str:
    """Left-aligned two-or-more column text table."""
    cells = [tuple(headers)] + [tuple(_cell(c) for c in r) for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    out = []
    for j, r in enumerate(cells):
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if j == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out)


def _cell(v):
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return ",".join(_cell(x) for x in v)
    return str(v)


def bound_table_csv(table: BoundTable) -> str:
    with_m3 = table.m == 3
    cols = ["n", "welch", "lb_complex", "lb_real"] + (["lb_real_m3"] if with_m3 else [])
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    for row in table.rows:
        vals = [str(row.n), repr(row.welch), repr(row.lb_complex), repr(row.lb_real)]
        if with_m3:
            vals.append(repr(row.lb_real_m3))
        buf.write(",".join(vals) + "\n")
    return buf.getvalue()
