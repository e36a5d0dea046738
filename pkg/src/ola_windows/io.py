"""Bit-stable CSV/JSON serialisation of windows and reports.

Floats are written with 17 significant digits, which round-trips every
IEEE double exactly; JSON objects are written with sorted keys. Files are
written to a temporary name and renamed into place.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .exceptions import InvalidArgumentError
from .windows import Window

__all__ = [
    "format_float",
    "dumps_json",
    "window_to_csv",
    "spectrum_to_csv",
    "write_report",
    "read_window",
    "atomic_write",
    "COMPARE_SCHEMA",
]

# JSON schema of the ``compare`` record
COMPARE_SCHEMA = {
    "type": "object",
    "required": ["length", "overlap", "kernel_alpha", "pad_factor", "windows"],
    "properties": {
        "length": {"type": "integer", "minimum": 2},
        "overlap": {"type": "integer", "minimum": 1},
        "kernel_alpha": {"type": "number", "exclusiveMinimum": 0},
        "pad_factor": {"type": "integer", "minimum": 4},
        "windows": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["label", "family", "alpha", "tau_linear", "tau_db", "tau_db_normalized",
                             "pb_residual", "main_lobe_width", "side_lobes_db"],
                "properties": {
                    "label": {"type": "string"},
                    "family": {"enum": ["half-sine", "kbd", "ola-dpss", "ola-dpss-low"]},
                    "alpha": {"type": ["number", "null"]},
                    "tau_linear": {"type": "number", "exclusiveMinimum": 0},
                    "tau_db": {"type": "number"},
                    "tau_db_normalized": {"type": "number"},
                    "pb_residual": {"type": "number", "minimum": 0},
                    "main_lobe_width": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5},
                    "side_lobes_db": {"type": "array", "maxItems": 5,
                                      "items": {"type": "number", "exclusiveMaximum": 0}},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

WINDOW_CSV_HEADER = "index,value"
SPECTRUM_CSV_HEADER = "frequency,magnitude_db"


def format_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgumentError(f"cannot serialise non-finite value {x!r}")
    return format(x, ".17g")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj, indent=2):
    """JSON text with sorted keys and 17-significant-digit floats."""
    return _encode(obj, indent, 0) + "\n"


def window_to_csv(w):
    lines = [WINDOW_CSV_HEADER]
    lines += [f"{k},{format_float(v)}" for k, v in enumerate(w.samples, start=1)]
    return "\n".join(lines) + "\n"


def spectrum_to_csv(report):
    lines = [SPECTRUM_CSV_HEADER]
    lines += [f"{format_float(f)},{format_float(m)}" for f, m in zip(report.bins, report.magnitude_db)]
    return "\n".join(lines) + "\n"


def _table_to_csv(rows):
    buf = _io.StringIO()
    keys = list(rows[0])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in (row[k] for k in keys)])
    return buf.getvalue()


def _flatten(d, prefix=""):
    out = {}
    for k in sorted(d):
        v = d[k]
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            for i, item in enumerate(v):
                if isinstance(item, dict):
                    out.update(_flatten(item, f"{key}.{i}."))
                else:
                    out[f"{key}.{i}"] = item
        else:
            out[key] = v
    return out


def _key_value_csv(d):
    lines = ["key,value"]
    for k, v in _flatten(d).items():
        if isinstance(v, (float, np.floating)):
            v = format_float(v)
        lines.append(f"{k},{v}")
    return "\n".join(lines) + "\n"


def render(report, fmt):
    """Serialise ``report`` to text in ``fmt`` (``csv`` or ``json``).

    Windows and spectra have dedicated CSV layouts; table-shaped dicts
    (``{"rows": [...]}``) become one CSV row per entry; anything else with a
    ``to_dict`` becomes a ``key,value`` listing.
    """
    if fmt not in ("csv", "json"):
        raise InvalidArgumentError(f"unknown format {fmt!r}")
    from .spectrum import SpectrumReport

    if fmt == "csv":
        if isinstance(report, Window):
            return window_to_csv(report)
        if isinstance(report, SpectrumReport):
            return spectrum_to_csv(report)
        if isinstance(report, dict) and "rows" in report:
            return _table_to_csv(report["rows"])
    d = report if isinstance(report, dict) else report.to_dict()
    return dumps_json(d) if fmt == "json" else _key_value_csv(d)


def atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_report(report, path, fmt="json"):
    """Write ``report`` to ``path`` atomically; ``path=None`` or ``"-"`` returns the text."""
    text = render(report, fmt)
    if path is None or str(path) == "-":
        return text
    atomic_write(path, text)
    return text


def read_window(path):
    """Read a window written by :func:`write_report` (CSV or JSON)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        d = json.loads(text)
        return Window(np.array(d["samples"], dtype=float), d.get("overlap"), d.get("label", path.stem))
    lines = text.strip().splitlines()
    if not lines or lines[0].strip() != WINDOW_CSV_HEADER:
        raise InvalidArgumentError(f"{path}: expected CSV header {WINDOW_CSV_HEADER!r}")
    values = [float(line.split(",")[1]) for line in lines[1:]]
    return Window(np.array(values), None, path.stem)
