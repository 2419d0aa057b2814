"""
Timing of repeated distance calls on random series.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from elastic_clust.distances.registry import resolve_distance
from elastic_clust.distances.spec import DistanceSpec
from elastic_clust.errors import ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchResult:
    metric: str
    length: int
    reps: int
    seconds: float

    @property
    def per_call_ms(self) -> float:
        return self.seconds * 1000.0 / self.reps


def bench_distance(
    metric: DistanceSpec | str = "dtw",
    lengths: Sequence[int] = (1000,),
    reps: int = 200,
    seed: int = 1,
    **params: Any,
) -> list[BenchResult]:
    """
    Time ``reps`` calls of one distance per series length.

    ``metric`` is a measure name (with ``params``) or a `DistanceSpec`.
    Each length gets one pair of standard normal series drawn from ``seed``.
    The first call is made before timing so kernel compilation is excluded.

    Raises:
        ParameterError: On a non-positive length or repetition count.
    """
    if reps < 1:
        raise ParameterError(f"reps must be at least 1, got {reps}")
    fn = resolve_distance(metric, **params)
    rng = np.random.default_rng(seed)
    results = []
    for length in lengths:
        if length < fn.measure.min_length:
            raise ParameterError(
                f"length must be at least {fn.measure.min_length} for {metric}, got {length}"
            )
        a, b = rng.standard_normal(length), rng.standard_normal(length)
        a, b = fn.prepare(a), fn.prepare(b)
        fn.raw(a, b)
        started = time.perf_counter()
        for _ in range(reps):
            fn.raw(a, b)
        seconds = time.perf_counter() - started
        logger.info(f"{fn.spec}: {reps} calls at length {length} took {seconds:.3f} s")
        results.append(
            BenchResult(metric=fn.spec.name, length=int(length), reps=int(reps), seconds=seconds)
        )
    return results
