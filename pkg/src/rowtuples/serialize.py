"""JSON encoding and decoding for tuples, vectors, and matrices.

The on-disk tuple format is a JSON document

    {"d": 2, "dim": 3, "matrices": [[[re, im], ...], ...]}

with every matrix entry written as a two-element ``[re, im]`` pair.
Decoding is lenient — bare numbers are accepted as real entries — but
every failure carries a one-line diagnostic naming the offending field.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import ShapeError
from .tuples import RowTuple

__all__ = [
    "digest",
    "load_document",
    "matrix_from_json",
    "matrix_to_json",
    "tuple_from_json",
    "tuple_to_json",
    "vector_from_json",
    "vector_to_json",
]


def _entry_to_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _entry_from_json(obj, field: str) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if (
        isinstance(obj, (list, tuple))
        and len(obj) == 2
        and all(isinstance(x, (int, float)) for x in obj)
    ):
        return complex(obj[0], obj[1])
    raise ShapeError(f"{field}: entries must be numbers or [re, im] pairs")


def matrix_to_json(mat: np.ndarray) -> list:
    mat = np.asarray(mat, dtype=np.complex128)
    return [[_entry_to_pair(z) for z in row] for row in mat]


def matrix_from_json(obj, field: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ShapeError(f"{field}: expected a non-empty list of rows")
    rows = []
    width = None
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise ShapeError(f"{field}[{i}]: expected a list of entries")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ShapeError(f"{field}[{i}]: ragged row (got {len(row)}, want {width})")
        rows.append([_entry_from_json(z, f"{field}[{i}]") for z in row])
    mat = np.array(rows, dtype=np.complex128)
    if not np.all(np.isfinite(mat.view(np.float64))):
        raise ShapeError(f"{field}: entries must be finite")
    return mat


def vector_to_json(vec: np.ndarray) -> list:
    return [_entry_to_pair(z) for z in np.asarray(vec, dtype=np.complex128)]


def vector_from_json(obj, field: str) -> np.ndarray:
    if isinstance(obj, dict):
        obj = obj.get("vector")
        if obj is None:
            raise ShapeError(f"{field}: document has no 'vector' field")
    if not isinstance(obj, list) or not obj:
        raise ShapeError(f"{field}: expected a non-empty list of entries")
    vec = np.array([_entry_from_json(z, field) for z in obj], dtype=np.complex128)
    if not np.all(np.isfinite(vec.view(np.float64))):
        raise ShapeError(f"{field}: entries must be finite")
    return vec


def tuple_to_json(t: RowTuple) -> dict:
    return {
        "d": t.d,
        "dim": t.dim,
        "matrices": [matrix_to_json(mat) for mat in t.mats],
    }


def tuple_from_json(obj) -> RowTuple:
    if not isinstance(obj, dict):
        raise ShapeError("tuple: expected a JSON object with d, dim, matrices")
    for key in ("d", "dim", "matrices"):
        if key not in obj:
            raise ShapeError(f"tuple: missing field '{key}'")
    d, dim, mats_json = obj["d"], obj["dim"], obj["matrices"]
    if not isinstance(d, int) or d < 1:
        raise ShapeError("d: expected a positive integer")
    if not isinstance(dim, int) or dim < 0:
        raise ShapeError("dim: expected a nonnegative integer")
    if not isinstance(mats_json, list) or len(mats_json) != d:
        raise ShapeError(f"matrices: expected a list of {d} matrices")
    mats = []
    for k, mj in enumerate(mats_json):
        if dim == 0:
            mats.append(np.zeros((0, 0), dtype=np.complex128))
            continue
        mat = matrix_from_json(mj, f"matrices[{k}]")
        if mat.shape != (dim, dim):
            raise ShapeError(
                f"matrices[{k}]: shape {mat.shape} does not match dim {dim}"
            )
        mats.append(mat)
    return RowTuple(mats)


def load_document(path: str):
    """Parse a JSON file, reporting malformed content with the path."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ShapeError(f"input: cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(raw), raw
    except json.JSONDecodeError as exc:
        raise ShapeError(f"input: malformed JSON in {path}: {exc.msg}") from exc


def digest(*parts: bytes) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part)
    return h.hexdigest()
