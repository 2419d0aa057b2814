"""
Core time-series and dataset types.

A time series is a one-dimensional, read-only ``numpy`` array of finite
float64 values. A `Dataset` holds ``n`` equal-length series as an ``(n, m)``
array together with optional class labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from elastic_clust.errors import InvalidSeriesError, SeriesTooShortError, ShapeMismatchError

TimeSeries = np.ndarray

ZERO_STD_THRESHOLD = 1e-12


def as_series(values: Iterable[float] | np.ndarray, min_length: int = 1) -> TimeSeries:
    """
    Validate ``values`` and return them as a read-only float64 series.

    Args:
        values: Any one-dimensional sequence of real numbers.
        min_length (int): Smallest accepted length.

    Returns:
        np.ndarray: A read-only copy of the values.

    Raises:
        InvalidSeriesError: If the input is not one-dimensional or holds NaN/Inf.
        SeriesTooShortError: If the series is shorter than ``min_length``.
    """
    try:
        x = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise InvalidSeriesError(f"Series values are not numeric: {e}") from e
    if x.ndim != 1:
        raise InvalidSeriesError(f"Expected a univariate series, got shape {x.shape}")
    if x.shape[0] < min_length:
        raise SeriesTooShortError(
            f"Series of length {x.shape[0]} is shorter than the required {min_length}",
            details={"length": int(x.shape[0]), "required": min_length},
        )
    if not np.all(np.isfinite(x)):
        raise InvalidSeriesError("Series contains non-finite values (NaN or Inf)")
    x.flags.writeable = False
    return x


def check_same_length(a: TimeSeries, b: TimeSeries) -> None:
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatchError(
            f"Series lengths differ: {a.shape[0]} != {b.shape[0]}",
            details={"lengths": (int(a.shape[0]), int(b.shape[0]))},
        )


def z_normalize(x: Iterable[float] | np.ndarray) -> TimeSeries:
    """
    Scale a series to zero mean and unit (population) standard deviation.

    The standard deviation uses the 1/m convention. Series with a standard
    deviation below 1e-12 map to the all-zero series of the same length.

    Args:
        x: The series to normalise.

    Returns:
        np.ndarray: The normalised series.
    """
    x = as_series(x)
    sigma = x.std()
    if sigma < ZERO_STD_THRESHOLD:
        out = np.zeros_like(x)
    else:
        out = (x - x.mean()) / sigma
    out.flags.writeable = False
    return out


def derivative_transform(x: Iterable[float] | np.ndarray) -> TimeSeries:
    """
    Derivative series used by DDTW and WDDTW.

    Element ``k`` is ``((x[k+1] - x[k]) + (x[k+2] - x[k]) / 2) / 2``, the average
    of the left slope and the centred slope at interior point ``k + 1``. The
    output has length ``m - 2``; the end points get no estimate.

    Raises:
        SeriesTooShortError: If the series has fewer than three points.
    """
    x = as_series(x, min_length=3)
    out = ((x[1:-1] - x[:-2]) + (x[2:] - x[:-2]) / 2.0) / 2.0
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    A collection of equal-length univariate series with optional labels.

    Attributes:
        X (np.ndarray): Read-only array of shape ``(n, m)``.
        labels (np.ndarray | None): ``n`` class labels (kept as strings), or None.
        name (str): Problem name, used in results files.
    """

    X: np.ndarray
    labels: Optional[np.ndarray] = None
    name: str = "dataset"

    def __post_init__(self) -> None:
        X = self.X
        if isinstance(X, np.ndarray) and X.ndim == 2:
            X = np.array(X, dtype=np.float64)
        else:
            rows = [np.asarray(row, dtype=np.float64) for row in X]
            if not rows:
                X = np.zeros((0, 0), dtype=np.float64)
            else:
                lengths = {row.shape[0] for row in rows}
                if len(lengths) != 1:
                    raise ShapeMismatchError(
                        f"Dataset series have unequal lengths: {sorted(lengths)}",
                        details={"lengths": sorted(lengths)},
                    )
                X = np.vstack(rows)
        if X.ndim != 2:
            raise InvalidSeriesError(f"Dataset must be two-dimensional, got shape {X.shape}")
        if X.size and not np.all(np.isfinite(X)):
            raise InvalidSeriesError("Dataset contains non-finite values (NaN or Inf)")
        X.flags.writeable = False
        object.__setattr__(self, "X", X)

        if self.labels is not None:
            labels = np.asarray([str(label) for label in self.labels], dtype=object)
            if labels.shape[0] != X.shape[0]:
                raise ShapeMismatchError(
                    f"Got {labels.shape[0]} labels for {X.shape[0]} series",
                    details={"labels": int(labels.shape[0]), "series": int(X.shape[0])},
                )
            labels.flags.writeable = False
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_series(
        cls,
        series: Sequence[Iterable[float]],
        labels: Optional[Sequence] = None,
        name: str = "dataset",
    ) -> "Dataset":
        return cls(X=[as_series(s) for s in series], labels=labels, name=name)

    @property
    def n_cases(self) -> int:
        return int(self.X.shape[0])

    @property
    def series_length(self) -> int:
        return int(self.X.shape[1])

    @property
    def classes(self) -> list[str]:
        """Distinct labels in order of first appearance."""
        if self.labels is None:
            return []
        return list(dict.fromkeys(self.labels.tolist()))

    def __len__(self) -> int:
        return self.n_cases

    def __iter__(self) -> Iterator[TimeSeries]:
        return iter(self.X)

    def __getitem__(self, index: int) -> TimeSeries:
        return self.X[index]

    def subset(self, indices: Sequence[int]) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        labels = None if self.labels is None else self.labels[indices]
        return Dataset(X=self.X[indices], labels=labels, name=self.name)

    def without_labels(self) -> "Dataset":
        return Dataset(X=self.X, labels=None, name=self.name)

    def z_normalized(self) -> "Dataset":
        """Return a copy with every series z-normalised."""
        if self.n_cases == 0:
            return self
        return Dataset(
            X=np.vstack([z_normalize(x) for x in self.X]), labels=self.labels, name=self.name
        )
