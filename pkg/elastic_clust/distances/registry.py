"""
Name-keyed registry of distance measures.

Measures register themselves with the `register` decorator when
`elastic_clust.distances.elastic` is imported. Each entry holds the raw kernel,
which expects already validated (and, for derivative measures, already
transformed) series, so pairwise code can validate and transform once per
series instead of once per pair.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from elastic_clust.distances.spec import DISTANCE_NAMES, DistanceSpec
from elastic_clust.errors import UnknownDistanceError
from elastic_clust.series import TimeSeries, as_series, check_same_length

logger = logging.getLogger(__name__)

Kernel = Callable[[np.ndarray, np.ndarray, DistanceSpec], float]


@dataclass(frozen=True)
class Measure:
    name: str
    kernel: Kernel
    transform: Optional[Callable[[np.ndarray], np.ndarray]] = None
    min_length: int = 1

    def prepare(self, x: np.ndarray) -> np.ndarray:
        """Validate one series and apply the measure's transform."""
        x = as_series(x, min_length=self.min_length)
        return x if self.transform is None else self.transform(x)

    def prepare_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[0] == 0:
            return X
        return np.vstack([self.prepare(x) for x in X])


_MEASURES: dict[str, Measure] = {}


def register(
    name: str,
    transform: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    min_length: int = 1,
) -> Callable[[Kernel], Kernel]:
    """Decorator adding a raw kernel to the registry under ``name``."""

    def decorator(kernel: Kernel) -> Kernel:
        if name in _MEASURES:
            logger.debug(f"Re-registering distance measure '{name}'")
        _MEASURES[name] = Measure(
            name=name, kernel=kernel, transform=transform, min_length=min_length
        )
        return kernel

    return decorator


def get_measure(name: str) -> Measure:
    try:
        return _MEASURES[str(name).lower()]
    except KeyError:
        raise UnknownDistanceError(
            f"Unknown distance '{name}'. Known: {', '.join(available_distances())}",
            details={"name": name},
        ) from None


def available_distances() -> list[str]:
    return [name for name in DISTANCE_NAMES if name in _MEASURES]


class DistanceFunction:
    """
    A measure with its parameters bound, callable on two series.

    Instances are immutable and may be shared between threads.
    """

    __slots__ = ("spec", "measure")

    def __init__(self, spec: DistanceSpec):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "measure", get_measure(spec.name))

    def __setattr__(self, key: str, value: Any) -> None:
        raise AttributeError("DistanceFunction is immutable")

    def __call__(self, a: TimeSeries, b: TimeSeries) -> float:
        a = as_series(a)
        b = as_series(b)
        check_same_length(a, b)
        return self.raw(self.measure.prepare(a), self.measure.prepare(b))

    def raw(self, a: np.ndarray, b: np.ndarray) -> float:
        """Apply the kernel to series that were already passed through `prepare`."""
        return float(self.measure.kernel(a, b, self.spec))

    def prepare(self, x: np.ndarray) -> np.ndarray:
        return self.measure.prepare(x)

    def prepare_many(self, X: np.ndarray) -> np.ndarray:
        return self.measure.prepare_many(X)

    def __repr__(self) -> str:
        return f"DistanceFunction({self.spec})"


def resolve_distance(spec: DistanceSpec | str, **params: Any) -> DistanceFunction:
    """
    Bind a measure's parameters and return a reusable two-series function.

    Args:
        spec: A `DistanceSpec`, or a measure name plus keyword parameters
            (``resolve_distance("dtw", window=0.1)``).

    Raises:
        UnknownDistanceError: If the name is not registered.
    """
    if isinstance(spec, str):
        spec = DistanceSpec.create(spec, **params)
    elif params:
        spec = spec.with_params(**params)
    return DistanceFunction(spec)
