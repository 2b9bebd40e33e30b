"""Columnar text and structured-record emission with fixed float format."""
from __future__ import annotations

import json
import math
import os

import numpy as np

from .errors import DataIOError
from .phase import Kind, SpectralPoint

FLOAT_FMT = "%.16e"


def _fmt(v: float) -> str:
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return FLOAT_FMT % v


def write_columns(path, columns, names) -> None:
    """Whitespace-separated columns with a '# name ...' header."""
    cols = [np.asarray(c, dtype=float).ravel() for c in columns]
    if len({len(c) for c in cols}) > 1:
        raise DataIOError("columns differ in length")
    lines = ["# " + " ".join(names)]
    for row in zip(*cols):
        lines.append(" ".join(_fmt(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def read_columns(path, ncol: int | None = None) -> np.ndarray:
    rows = []
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                s = line.split("#", 1)[0].strip()
                if not s:
                    continue
                try:
                    row = [float(v) for v in s.split()]
                except ValueError:
                    raise DataIOError(f"{path}:{lineno}: cannot parse {s!r}") from None
                if ncol is not None and len(row) != ncol:
                    raise DataIOError(f"{path}:{lineno}: expected {ncol} columns")
                rows.append(row)
    except DataIOError:
        raise
    except OSError as e:
        raise DataIOError(f"cannot read {path}: {e}") from e
    return np.array(rows, dtype=float)


def _to_json_text(obj, indent=0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_to_json_text(v, indent + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        return "[" + ", ".join(_to_json_text(v, indent + 1) for v in seq) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return _fmt(v) if math.isfinite(v) else json.dumps(str(_fmt(v)))
    if isinstance(obj, complex):
        return _to_json_text([obj.real, obj.imag], indent)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def write_record(path, record: dict) -> None:
    """JSON record, keys sorted, floats in fixed 17-digit scientific form."""
    _write_text(path, _to_json_text(record) + "\n")


def read_record(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise DataIOError(f"cannot read record {path}: {e}") from e


def write_spectrum(path, points) -> None:
    """Records (Re zeta, Im zeta, Re C, Im C, kind)."""
    lines = ["# re_zeta im_zeta re_C im_C kind"]
    for p in points:
        lines.append(" ".join([_fmt(p.zeta.real), _fmt(p.zeta.imag), _fmt(p.C.real),
                               _fmt(p.C.imag), p.kind.value]))
    _write_text(path, "\n".join(lines) + "\n")


def read_spectrum(path):
    out = []
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                s = line.split("#", 1)[0].strip()
                if not s:
                    continue
                parts = s.split()
                if len(parts) != 5:
                    raise DataIOError(f"{path}:{lineno}: expected 5 fields")
                try:
                    a, b, c, d = map(float, parts[:4])
                    out.append(SpectralPoint(complex(a, b), complex(c, d), Kind(parts[4])))
                except ValueError as e:
                    raise DataIOError(f"{path}:{lineno}: {e}") from None
    except DataIOError:
        raise
    except OSError as e:
        raise DataIOError(f"cannot read {path}: {e}") from e
    return out


def _write_text(path, text: str) -> None:
    try:
        d = os.path.dirname(os.fspath(path))
        if d:
            os.makedirs(d, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise DataIOError(f"cannot write {path}: {e}") from e
