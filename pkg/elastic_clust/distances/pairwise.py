"""
Pairwise distance matrices.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional

import numpy as np

from elastic_clust.distances.registry import DistanceFunction, resolve_distance
from elastic_clust.distances.spec import DistanceSpec
from elastic_clust.errors import InvalidSeriesError, ParameterError, ShapeMismatchError
from elastic_clust.series import Dataset

logger = logging.getLogger(__name__)


def as_matrix(X: Dataset | np.ndarray) -> np.ndarray:
    """Return the ``(n, m)`` value array of a dataset or array-like of series."""
    if isinstance(X, Dataset):
        return X.X
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InvalidSeriesError(
            f"Expected a collection of univariate series, got shape {arr.shape}"
        )
    return arr


def pairwise_distance(
    X: Dataset | np.ndarray,
    Y: Optional[Dataset | np.ndarray] = None,
    spec: DistanceSpec | DistanceFunction | str = "dtw",
    threads: int = 1,
    **params: Any,
) -> np.ndarray:
    """
    Distance matrix between the series of ``X`` (and ``Y``).

    Without ``Y`` the upper triangle is computed, mirrored, and the diagonal
    set to 0. With ``Y`` the result has shape ``(len(X), len(Y))``.

    Args:
        X: A `Dataset` or an ``(n, m)`` array.
        Y: Optional second collection with the same series length.
        spec: Measure name, `DistanceSpec` or resolved `DistanceFunction`.
        threads (int): Worker threads computing rows in parallel. The kernels
            release the GIL; entries do not depend on the schedule.
        **params: Parameter overrides when ``spec`` is a name or spec.

    Raises:
        ShapeMismatchError: If the series lengths differ.
    """
    if threads < 1:
        raise ParameterError(f"threads must be at least 1, got {threads}")
    fn = spec if isinstance(spec, DistanceFunction) else resolve_distance(spec, **params)

    A = as_matrix(X)
    symmetric = Y is None
    B = A if symmetric else as_matrix(Y)
    if A.shape[0] and B.shape[0] and A.shape[1] != B.shape[1]:
        raise ShapeMismatchError(
            f"Series lengths differ: {A.shape[1]} != {B.shape[1]}",
            details={"lengths": (int(A.shape[1]), int(B.shape[1]))},
        )

    Ap = fn.prepare_many(A)
    Bp = Ap if symmetric else fn.prepare_many(B)
    n, p = A.shape[0], B.shape[0]

    def row(i: int) -> np.ndarray:
        start = i + 1 if symmetric else 0
        out = np.zeros(p)
        for j in range(start, p):
            out[j] = fn.raw(Ap[i], Bp[j])
        return out

    if threads == 1 or n < 2:
        rows = [row(i) for i in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, range(n)))

    D = np.vstack(rows) if rows else np.zeros((0, p))
    if symmetric:
        D = np.triu(D, k=1)
        D = D + D.T
    logger.debug(f"pairwise {fn.spec}: {D.shape[0]}x{D.shape[1]} matrix, threads={threads}")
    return D
