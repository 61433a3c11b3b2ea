"""File formats: matrices, coefficient grids, and report serialization.

A matrix file is a JSON document ``{"rows": r, "cols": c, "entries": [...]}``
whose entries are ``[re, im]`` pairs in row-major order. All floating
values are written with 17 significant digits so every number round-trips
to the identical double.
"""

import json
import math
import os

import numpy as np

from .errors import SpeclocError
from .lyapunov import LyapunovForm


class ParseError(SpeclocError):
    """A document failed to parse or violates its schema."""


def format_float(x):
    """17-significant-digit decimal form of a finite float (round-trip exact)."""
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(float(x), ".17g")


def dumps_json17(obj, indent=0):
    """Serialize nested dict/list/scalar data as JSON with .17g floats.

    Key order is preserved; output is newline-terminated at top level only
    by the caller. The standard parser reads it back, floats bit-exactly.
    """
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{inner}{json.dumps(str(k))}: {dumps_json17(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(parts) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [dumps_json17(v, indent + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple)) for v in obj) and len(parts) <= 8:
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(inner + p for p in parts) + f"\n{pad}]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, (np.floating,)):
        return format_float(float(obj))
    if isinstance(obj, (np.integer,)):
        return json.dumps(int(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _finite_number(v, what):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{what} must be a number, got {v!r}")
    if not math.isfinite(v):
        raise ParseError(f"{what} must be finite, got {v!r}")
    return float(v)


def _entry_to_complex(entry, what):
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(_finite_number(entry, what), 0.0)
    if isinstance(entry, list) and len(entry) == 2:
        return complex(_finite_number(entry[0], f"{what}[0]"),
                       _finite_number(entry[1], f"{what}[1]"))
    raise ParseError(f"{what} must be a [re, im] pair, got {entry!r}")


def loads_matrix(text):
    """Parse a matrix document into a complex128 array."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("matrix document must be a JSON object")
    for key in ("rows", "cols", "entries"):
        if key not in doc:
            raise ParseError(f"matrix document is missing {key!r}")
    rows, cols = doc["rows"], doc["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise ParseError(f"rows/cols must be positive integers, got {rows!r}, {cols!r}")
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != rows * cols:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise ParseError(f"expected {rows * cols} entries, got {got}")
    values = [_entry_to_complex(e, f"entries[{i}]") for i, e in enumerate(entries)]
    return np.array(values, dtype=np.complex128).reshape(rows, cols)


def load_matrix(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads_matrix(text)


def matrix_document(m):
    """Row-major dict form of a matrix, entries as [re, im] float pairs."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"need a 2-D matrix, got shape {m.shape}")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(v.real), float(v.imag)] for v in m.reshape(-1)],
    }


def dumps_matrix(m):
    return dumps_json17(matrix_document(m)) + "\n"


def save_matrix(m, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(m))


def loads_coefficients(text, base_dir="."):
    """Parse a coefficient document into (LyapunovForm, B or None).

    Schema: ``{"coeffs": [[...], ...], "rhs_sign": +-1, "b_path": "..."}``
    where each grid cell is a real number or an [re, im] pair; rhs_sign
    defaults to +1; b_path, when present, names a matrix file resolved
    relative to ``base_dir``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "coeffs" not in doc:
        raise ParseError("coefficient document must be an object with 'coeffs'")
    grid = doc["coeffs"]
    if not isinstance(grid, list) or not grid or not all(isinstance(r, list) for r in grid):
        raise ParseError("'coeffs' must be a nonempty list of rows")
    size = len(grid)
    if any(len(r) != size for r in grid):
        raise ParseError(f"'coeffs' must be square, got row lengths {[len(r) for r in grid]}")
    cells = [[_entry_to_complex(v, f"coeffs[{i}][{j}]") for j, v in enumerate(row)]
             for i, row in enumerate(grid)]
    rhs_sign = doc.get("rhs_sign", 1)
    if rhs_sign not in (1, -1):
        raise ParseError(f"rhs_sign must be 1 or -1, got {rhs_sign!r}")
    try:
        form = LyapunovForm(np.array(cells, dtype=np.complex128), rhs_sign=rhs_sign)
    except (ValueError, SpeclocError) as exc:
        raise ParseError(f"invalid coefficient grid: {exc}") from exc
    b = None
    if doc.get("b_path") is not None:
        if not isinstance(doc["b_path"], str):
            raise ParseError("b_path must be a string")
        b = load_matrix(os.path.join(base_dir, doc["b_path"]))
    return form, b


def load_coefficients(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads_coefficients(text, base_dir=os.path.dirname(os.path.abspath(path)))
