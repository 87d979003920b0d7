"""Deterministic JSON and CSV output.

Floats are written with 17 significant digits and keys in sorted order, so an
identical report always produces identical bytes and parses back exactly.
"""
from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from typing import Any

import numpy as np


def _float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    # keep floats recognisable as floats after a round trip
    if all(c not in s for c in ".eEn"):
        s += ".0"
    return s


def to_plain(obj: Any) -> Any:
    """Convert reports to dict/list/str/float/int/bool/None."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if hasattr(obj, "as_dict"):
        return to_plain(obj.as_dict())
    if dataclasses.is_dataclass(obj):
        return to_plain(dataclasses.asdict(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write(obj, out: list, indent: int, level: int):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = sorted(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(pad + json.dumps(k) + ": ")
            _write(v, out, indent, level + 1)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if all(not isinstance(v, (dict, list)) for v in obj):
            parts: list = []
            for i, v in enumerate(obj):
                _write(v, parts, indent, level + 1)
                if i < len(obj) - 1:
                    parts.append(", ")
            out.append("[" + "".join(parts) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _write(v, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(report: Any, indent: int = 2) -> str:
    out: list = []
    _write(to_plain(report), out, indent, 0)
    out.append("\n")
    return "".join(out)


def loads_json(text: str) -> Any:
    return json.loads(text)


def _cell(v) -> str:
    v = to_plain(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _float(v)
    if isinstance(v, (dict, list)):
        return dumps_json(v, indent=0).replace("\n", "")
    return str(v)


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    """(dotted key, scalar) pairs in sorted key order, for key,value CSV output."""
    obj = to_plain(obj)
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out.extend(flatten(obj[k], f"{prefix}.{k}" if prefix else k))
        return out
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out.extend(flatten(v, f"{prefix}[{i}]"))
        return out
    return [(prefix, obj)]
