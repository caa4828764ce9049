"""Read and write dense matrices as Matrix Market arrays, CSV or JSON."""

import csv
import io
import json
import os

import numpy as np

from .linalg import as_matrix

__all__ = ["FORMATS", "MatrixParseError", "guess_format", "read_matrix", "write_matrix", "dumps", "loads"]

FORMATS = ("matrix-market-array", "csv-real", "json-complex")

_EXTENSIONS = {
    ".mtx": "matrix-market-array",
    ".mm": "matrix-market-array",
    ".csv": "csv-real",
    ".json": "json-complex",
}


class MatrixParseError(ValueError):
    pass


def guess_format(path, fmt=None):
    if fmt:
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
        return fmt
    ext = os.path.splitext(str(path))[1].lower()
    try:
        return _EXTENSIONS[ext]
    except KeyError:
        raise ValueError(f"cannot infer matrix format from {path!r}; pass --format") from None


def _num(x):
    return repr(float(x))


def dumps(A, fmt):
    A = np.asarray(A, dtype=np.complex128)
    m, n = A.shape
    if fmt == "json-complex":
        data = [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in A]
        return json.dumps({"rows": m, "cols": n, "data": data}) + "\n"
    if fmt == "csv-real":
        if np.any(A.imag != 0):
            raise ValueError("csv-real cannot hold complex entries")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in A.real:
            w.writerow([_num(x) for x in row])
        return buf.getvalue()
    if fmt == "matrix-market-array":
        complex_ = bool(np.any(A.imag != 0))
        field = "complex" if complex_ else "real"
        lines = [f"%%MatrixMarket matrix array {field} general", f"{m} {n}"]
        for z in A.T.ravel():  # column-major
            lines.append(f"{_num(z.real)} {_num(z.imag)}" if complex_ else _num(z.real))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def loads(text, fmt):
    try:
        if fmt == "json-complex":
            return _load_json(text)
        if fmt == "csv-real":
            rows = [r for r in csv.reader(io.StringIO(text)) if r]
            if not rows or len({len(r) for r in rows}) != 1:
                raise MatrixParseError("csv rows are empty or ragged")
            return as_matrix([[float(x) for x in r] for r in rows])
        if fmt == "matrix-market-array":
            return _load_mm(text)
    except MatrixParseError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise MatrixParseError(str(exc)) from exc
    raise ValueError(f"unknown format {fmt!r}")


def _load_json(text):
    obj = json.loads(text)
    m, n, data = obj["rows"], obj["cols"], obj["data"]
    if len(data) != m or any(len(row) != n for row in data):
        raise MatrixParseError("json data does not match rows/cols")
    out = np.empty((m, n), dtype=np.complex128)
    for i, row in enumerate(data):
        for j, z in enumerate(row):
            re, im = z["re"], z["im"]
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
                raise MatrixParseError(f"entry ({i},{j}) must have numeric re/im")
            out[i, j] = complex(re, im)
    return as_matrix(out)


def _load_mm(text):
    lines = text.splitlines()
    if not lines:
        raise MatrixParseError("empty Matrix Market file")
    header = lines[0].split()
    if (
        len(header) != 5
        or header[0].lower() != "%%matrixmarket"
        or header[1].lower() != "matrix"
        or header[2].lower() != "array"
        or header[4].lower() != "general"
    ):
        raise MatrixParseError(f"unsupported Matrix Market header: {lines[0]!r}")
    field = header[3].lower()
    if field not in ("real", "complex", "integer"):
        raise MatrixParseError(f"unsupported field {field!r}")
    body = [ln for ln in lines[1:] if ln.strip() and not ln.startswith("%")]
    m, n = (int(x) for x in body[0].split())
    values = body[1:]
    if len(values) != m * n:
        raise MatrixParseError(f"expected {m * n} values, found {len(values)}")
    flat = np.empty(m * n, dtype=np.complex128)
    for k, ln in enumerate(values):
        parts = ln.split()
        if field == "complex":
            flat[k] = complex(float(parts[0]), float(parts[1]))
        else:
            flat[k] = float(parts[0])
    return as_matrix(flat.reshape(n, m).T)


def read_matrix(path, fmt=None):
    fmt = guess_format(path, fmt)
    with open(path) as fh:
        return loads(fh.read(), fmt)


def write_matrix(path, A, fmt=None):
    fmt = guess_format(path, fmt)
    text = dumps(A, fmt)
    with open(path, "w") as fh:
        fh.write(text)
