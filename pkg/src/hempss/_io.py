"""CSV/JSON writers shared by the modules and the CLI."""

import io
import json
import math

import numpy as np


def fmt(x, digits=12):
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return format(x, f".{digits}g")
    return str(x)


def csv_text(header, rows, digits=12):
    """Comma-separated text with a header row and LF line endings."""
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v, digits) for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, header, rows, digits=12):
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(csv_text(header, rows, digits))


def _float17(x):
    if not math.isfinite(x):
        return "NaN" if math.isnan(x) else ("Infinity" if x > 0 else "-Infinity")
    text = format(x, ".17g")
    return text if any(ch in text for ch in ".e") else text + ".0"


def _encode(obj, indent, level):
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float):
        return _float17(obj)
    if isinstance(obj, dict):
        items = [(json.dumps(str(k)), v) for k, v in obj.items()]
        parts = [f"{k}: {_encode(v, indent, level + 1)}" for k, v in items]
        return _join(parts, "{", "}", indent, level)
    if isinstance(obj, (list, tuple)):
        return _join([_encode(v, indent, level + 1) for v in obj], "[", "]", indent, level)
    return json.dumps(obj)


def _join(parts, open_, close, indent, level):
    if not parts:
        return open_ + close
    if indent is None:
        return open_ + ", ".join(parts) + close
    pad = " " * indent
    inner = ",\n".join(pad * (level + 1) + part for part in parts)
    return f"{open_}\n{inner}\n{pad * level}{close}"


def dumps17(obj, indent=2):
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj, indent, 0)
