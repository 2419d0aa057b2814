"""
Cost matrices and alignment paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from elastic_clust.distances import _kernels

# relative tolerance for "this predecessor reproduces the cell"
TRACEBACK_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """
    Accumulated cost grid of an elastic measure.

    Attributes:
        values (np.ndarray): ``(m+1, m+1)`` grid. Row and column 0 hold the
            measure's boundary values; cells outside the band (or otherwise
            unreachable) hold the ``INF`` sentinel.
        radius (int): Sakoe-Chiba radius, ``m`` when unbanded.
        measure (str): Name of the measure that filled the grid.
    """

    values: np.ndarray
    radius: int
    measure: str

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def final(self) -> float:
        return float(self.values[-1, -1])

    def cell(self, i: int, j: int) -> float:
        """Value at 1-based cell ``(i, j)`` (0 addresses the boundary)."""
        return float(self.values[i, j])

    def in_band(self, i: int, j: int) -> bool:
        return abs(i - j) <= self.radius

    def finite_mask(self) -> np.ndarray:
        return self.values < _kernels.INF


@dataclass(frozen=True)
class AlignmentPath:
    """
    Ordered 1-based index pairs aligning two series.

    A warping path starts at ``(1, 1)``, ends at ``(m, m)`` and moves by at most
    one index on each axis per step, never standing still.
    """

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_array(cls, pairs: np.ndarray) -> "AlignmentPath":
        return cls(tuple((int(i), int(j)) for i, j in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __getitem__(self, index: int) -> tuple[int, int]:
        return self.pairs[index]

    def as_array(self, zero_based: bool = False) -> np.ndarray:
        arr = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        return arr - 1 if zero_based else arr

    def is_warping_path(self, n: int, m: int | None = None) -> bool:
        m = n if m is None else m
        if not self.pairs or self.pairs[0] != (1, 1) or self.pairs[-1] != (n, m):
            return False
        for (i0, j0), (i1, j1) in zip(self.pairs, self.pairs[1:]):
            di, dj = i1 - i0, j1 - j0
            if not (0 <= di <= 1 and 0 <= dj <= 1) or (di == 0 and dj == 0):
                return False
        return True

    def cost(self, pointwise: np.ndarray) -> float:
        """Sum of a 1-based-addressed pointwise matrix (shape ``(m+1, m+1)``) along the path."""
        idx = self.as_array()
        return float(np.sum(pointwise[idx[:, 0], idx[:, 1]]))

    def max_deviation(self) -> int:
        idx = self.as_array()
        return int(np.max(np.abs(idx[:, 0] - idx[:, 1]))) if len(idx) else 0


def trace_path(
    matrix: CostMatrix, diag: np.ndarray, vert: np.ndarray, horiz: np.ndarray
) -> AlignmentPath:
    """
    Recover an optimal path from a filled cost matrix.

    Args:
        matrix (CostMatrix): The accumulated grid.
        diag, vert, horiz (np.ndarray): Move costs into each cell, same shape
            as the grid: diagonal from ``(i-1, j-1)``, vertical from
            ``(i-1, j)``, horizontal from ``(i, j-1)``.

    Returns:
        AlignmentPath: Path from ``(1, 1)`` to ``(n, m)``. Ties prefer the
        diagonal, then vertical, then horizontal move.
    """
    pairs = _kernels.traceback(matrix.values, diag, vert, horiz, TRACEBACK_RTOL)
    return AlignmentPath.from_array(pairs)


def trace_lcss_matches(
    matrix: CostMatrix, a: np.ndarray, b: np.ndarray, epsilon: float
) -> AlignmentPath:
    """Matched index pairs of a longest common subsequence, in increasing order."""
    pairs = _kernels.lcss_traceback(matrix.values, a, b, float(epsilon))
    return AlignmentPath.from_array(pairs)
