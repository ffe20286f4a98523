"""Reading and writing complex matrices as JSON: {"dim": n, "entries": [[[re, im], ...], ...]}, row-major."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError


def matrix_to_json(U: np.ndarray) -> dict:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise MatrixFormatError(f"expected a square matrix, got shape {U.shape}")
    return {
        "dim": int(U.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in U],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Parse the matrix object; every structural problem raises MatrixFormatError (unitarity is not checked here)."""
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise MatrixFormatError('matrix JSON must be an object with "dim" and "entries"')
    n = obj["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MatrixFormatError(f'"dim" must be a positive integer, got {n!r}')
    rows = obj["entries"]
    if not isinstance(rows, list) or len(rows) != n:
        raise MatrixFormatError(f'"entries" must be a list of {n} rows')
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MatrixFormatError(f"row {i} must hold {n} entries")
        for j, z in enumerate(row):
            if (not isinstance(z, list) or len(z) != 2
                    or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in z)):
                raise MatrixFormatError(f"entry ({i}, {j}) must be a [re, im] pair of numbers, got {z!r}")
            if not all(math.isfinite(x) for x in z):
                raise MatrixFormatError(f"entry ({i}, {j}) is not finite")
            out[i, j] = complex(z[0], z[1])
    return out


def load_matrix(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read matrix file {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path} is not valid JSON: {exc}") from exc
    return matrix_from_json(obj)


def save_matrix(path, U: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(U)) + "\n")
