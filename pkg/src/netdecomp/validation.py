"""Input coercion shared by the estimators and the CLI."""

from __future__ import annotations

from os import PathLike

import numpy as np

from .exceptions import DimensionError
from .linalg import Mat, parse_scalar
from .system import NetworkSystem, load_system


def check_system(X) -> NetworkSystem:
    """Accept a NetworkSystem, a decoded document, JSON text or a file path."""
    if isinstance(X, NetworkSystem):
        return X
    if isinstance(X, (dict, str, PathLike)) or hasattr(X, "read"):
        return load_system(X)
    raise TypeError(f"expected a NetworkSystem, document or path, got {type(X).__name__}")


def check_states(X, n: int) -> Mat:
    """Coerce state vectors to an exact ``n_samples x n`` Mat.

    A single vector of length ``n`` is treated as one sample. Entries may be
    ints, Fractions, rational strings or floats (taken through their repr).
    """
    if isinstance(X, Mat):
        rows = X.to_rows()
    else:
        arr = np.asarray(X, dtype=object)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DimensionError(f"state array must be 1-D or 2-D, got {arr.ndim}-D")
        rows = arr.tolist()
    if any(len(r) != n for r in rows):
        raise DimensionError(f"state vectors must have {n} entries")
    return Mat(len(rows), n, (parse_scalar(x) for r in rows for x in r))


def to_object_array(M: Mat) -> np.ndarray:
    out = np.empty(M.shape, dtype=object)
    for i in range(M.rows):
        for j in range(M.cols):
            out[i, j] = M[i, j]
    return out
