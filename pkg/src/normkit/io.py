"""Reading and writing matrices and trajectory tables."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .core import NormkitError, as_cmatrix


class MatrixFormatError(NormkitError, ValueError):
    """A matrix file could not be parsed."""


def matrix_to_dict(a) -> dict:
    a = as_cmatrix(a)
    rows, cols = a.shape
    data = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_dict(doc) -> np.ndarray:
    if not isinstance(doc, dict):
        raise MatrixFormatError("matrix document must be a JSON object")
    try:
        rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    except KeyError as exc:
        raise MatrixFormatError(f"missing field {exc.args[0]!r}") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise MatrixFormatError("rows and cols must be non-negative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFormatError(f"expected {rows * cols} entries, got {len(data) if isinstance(data, list) else 'none'}")
    vals = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(data):
        if isinstance(pair, (int, float)) and not isinstance(pair, bool):
            pair = [pair, 0.0]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise MatrixFormatError(f"entry {k} must be [re, im]")
        try:
            re, im = float(pair[0]), float(pair[1])
        except (TypeError, ValueError):
            raise MatrixFormatError(f"entry {k} is not numeric") from None
        if not (np.isfinite(re) and np.isfinite(im)):
            raise MatrixFormatError(f"entry {k} is not finite")
        vals[k] = complex(re, im)
    return vals.reshape(rows, cols)


def dumps_matrix(a) -> str:
    """JSON text for ``a``; floats use the shortest repr that round-trips exactly."""
    return json.dumps(matrix_to_dict(a))


def loads_matrix(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from None
    return matrix_from_dict(doc)


def parse_matrix_market(text: str) -> np.ndarray:
    """Dense ``array`` Matrix Market data (``complex``, ``real`` or ``integer``, ``general``)."""
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise MatrixFormatError("missing %%MatrixMarket banner")
    banner = lines[0].split()
    if len(banner) != 5:
        raise MatrixFormatError(f"malformed banner: {lines[0]!r}")
    _, obj, fmt, field, sym = (b.lower() for b in banner)
    if obj != "matrix" or fmt != "array":
        raise MatrixFormatError("only dense 'matrix array' files are supported")
    if field not in ("complex", "real", "integer") or sym != "general":
        raise MatrixFormatError(f"unsupported field/symmetry: {field} {sym}")
    body = [ln.split() for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body or len(body[0]) != 2:
        raise MatrixFormatError("missing size line")
    try:
        rows, cols = int(body[0][0]), int(body[0][1])
        width = 2 if field == "complex" else 1
        entries = [[float(t) for t in ln] for ln in body[1:]]
    except ValueError as exc:
        raise MatrixFormatError(str(exc)) from None
    if len(entries) != rows * cols or any(len(e) != width for e in entries):
        raise MatrixFormatError(f"expected {rows * cols} entries of {width} number(s)")
    vals = np.array([complex(*e) if width == 2 else complex(e[0]) for e in entries], dtype=np.complex128)
    if not np.all(np.isfinite(vals)):
        raise MatrixFormatError("non-finite entry")
    return vals.reshape(cols, rows).T.copy()


def read_matrix(path) -> np.ndarray:
    """Load a MatrixFile JSON document or a Matrix Market array file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc.strerror}") from None
    if text.lstrip().startswith("%%"):
        return parse_matrix_market(text)
    return loads_matrix(text)


def write_matrix(path, a) -> None:
    Path(path).write_text(dumps_matrix(a) + "\n")


def trajectory_csv(traj) -> str:
    """CSV with header ``t,index,re,im``, one row per eigenvalue per ``t``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "index", "re", "im"])
    for t, lam in traj:
        for k, z in enumerate(lam):
            w.writerow([repr(float(t)), k, repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def read_trajectory_csv(text: str) -> list[tuple[float, np.ndarray]]:
    rows = list(csv.DictReader(io.StringIO(text)))
    out: dict[float, list[tuple[int, complex]]] = {}
    for r in rows:
        out.setdefault(float(r["t"]), []).append((int(r["index"]), complex(float(r["re"]), float(r["im"]))))
    return [(t, np.array([z for _, z in sorted(v)])) for t, v in out.items()]


def complex_pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def parse_complex(text: str) -> complex:
    """``"re,im"`` or any string ``complex()`` accepts (``"1+2j"``)."""
    text = text.strip()
    if "," in text:
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected 're,im', got {text!r}")
        return complex(float(parts[0]), float(parts[1]))
    return complex(text.replace("i", "j"))


def parse_reals(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]
