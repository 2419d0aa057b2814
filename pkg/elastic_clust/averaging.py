"""
Cluster exemplars: the arithmetic mean and DTW barycentre averaging (DBA).

DBA warps every member onto the current centre with DTW, collects the member
values aligned to each centre index and replaces the centre value by their
mean. Refinement repeats until the centre moves by less than the tolerance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from elastic_clust.distances.elastic import warping_path
from elastic_clust.distances.spec import DistanceSpec
from elastic_clust.errors import (
    ElasticClustError,
    EmptyClusterError,
    ParameterError,
    ShapeMismatchError,
)
from elastic_clust.series import TimeSeries, as_series

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BarycentreConfig:
    """
    DBA refinement settings.

    Attributes:
        max_refinements (int): Upper bound on DBA steps per call.
        convergence_tol (float): Stop once no centre value moves by this much.
        window (float): DTW window used to warp members onto the centre.
    """

    max_refinements: int = 10
    convergence_tol: float = 1e-5
    window: float = 0.2

    def __post_init__(self) -> None:
        if int(self.max_refinements) < 1:
            raise ParameterError(f"max_refinements must be at least 1, got {self.max_refinements}")
        if self.convergence_tol < 0:
            raise ParameterError(f"convergence_tol must be nonnegative, got {self.convergence_tol}")
        if not 0.0 <= self.window <= 1.0:
            raise ParameterError(f"window must lie in [0, 1], got {self.window}")

    @property
    def distance(self) -> DistanceSpec:
        return DistanceSpec("dtw", window=self.window)


@dataclass(frozen=True, eq=False)
class BarycentreTrace:
    """
    Result of a DBA run.

    ``costs[k]`` is the summed DTW distance from the members to the centre
    before step ``k``; the last entry belongs to the returned centre.
    """

    centre: np.ndarray
    costs: tuple[float, ...]
    steps: int
    converged: bool


def _members(cluster: Sequence[TimeSeries] | np.ndarray) -> np.ndarray:
    if isinstance(cluster, np.ndarray) and cluster.ndim == 2:
        members = np.asarray(cluster, dtype=np.float64)
    else:
        rows = [as_series(x) for x in cluster]
        if not rows:
            raise EmptyClusterError("Cannot average an empty cluster")
        lengths = {row.shape[0] for row in rows}
        if len(lengths) != 1:
            raise ShapeMismatchError(f"Cluster members have unequal lengths: {sorted(lengths)}")
        members = np.vstack(rows)
    if members.shape[0] == 0:
        raise EmptyClusterError("Cannot average an empty cluster")
    return members


def mean_average(cluster: Sequence[TimeSeries] | np.ndarray) -> TimeSeries:
    """Elementwise arithmetic mean of the members."""
    centre = _members(cluster).mean(axis=0)
    centre.flags.writeable = False
    return centre


def _accumulate(centre: np.ndarray, members: np.ndarray, spec: DistanceSpec):
    m = centre.shape[0]
    sums = np.zeros(m)
    counts = np.zeros(m, dtype=np.int64)
    total = 0.0
    for member in members:
        pairs, dist = warping_path(centre, member, spec)
        ci = pairs[:, 0] - 1
        np.add.at(sums, ci, member[pairs[:, 1] - 1])
        np.add.at(counts, ci, 1)
        total += dist
    if np.any(counts == 0):
        raise ElasticClustError(
            "DBA produced an empty bucket; warping paths must cover every index"
        )
    return sums, counts, total


def dba_buckets(
    centre: TimeSeries, cluster: Sequence[TimeSeries] | np.ndarray, window: float = 0.2
) -> list[list[float]]:
    """
    Member values warped onto each centre index.

    Returns:
        list[list[float]]: ``buckets[i]`` holds, member by member in path
        order, the values DTW aligns with ``centre[i]``.
    """
    centre = as_series(centre)
    members = _members(cluster)
    spec = DistanceSpec("dtw", window=window)
    buckets: list[list[float]] = [[] for _ in range(centre.shape[0])]
    for member in members:
        pairs, _ = warping_path(centre, member, spec)
        for i, j in pairs:
            buckets[i - 1].append(float(member[j - 1]))
    return buckets


def dba_step(
    centre: TimeSeries, cluster: Sequence[TimeSeries] | np.ndarray, window: float = 0.2
) -> TimeSeries:
    """One DBA update: the per-index mean of the warped member values."""
    centre = as_series(centre)
    members = _members(cluster)
    sums, counts, _ = _accumulate(centre, members, DistanceSpec("dtw", window=window))
    new_centre = sums / counts
    new_centre.flags.writeable = False
    return new_centre


def dba_trace(
    cluster: Sequence[TimeSeries] | np.ndarray,
    config: Optional[BarycentreConfig] = None,
    initial: Optional[TimeSeries] = None,
    rng_seed: Optional[int | np.random.Generator] = None,
) -> BarycentreTrace:
    """
    Refine a barycentre and record the cost at each step.

    Args:
        cluster: The member series.
        config (BarycentreConfig, optional): Refinement settings.
        initial: Starting centre. Defaults to a member chosen uniformly with
            ``rng_seed``.
        rng_seed: Seed or generator for the initial choice.

    Raises:
        EmptyClusterError: If the cluster has no members.
    """
    config = config or BarycentreConfig()
    members = _members(cluster)
    spec = config.distance
    if initial is None:
        if isinstance(rng_seed, np.random.Generator):
            rng = rng_seed
        else:
            rng = np.random.default_rng(rng_seed)
        centre = members[int(rng.integers(members.shape[0]))].copy()
    else:
        centre = np.array(as_series(initial), dtype=np.float64)
        if centre.shape[0] != members.shape[1]:
            raise ParameterError(
                f"Initial centre has length {centre.shape[0]}, members have {members.shape[1]}"
            )

    costs: list[float] = []
    converged = False
    steps = 0
    while steps < config.max_refinements:
        sums, counts, total = _accumulate(centre, members, spec)
        costs.append(total)
        new_centre = sums / counts
        steps += 1
        shift = float(np.max(np.abs(new_centre - centre)))
        centre = new_centre
        logger.debug(f"DBA step {steps}: cost {total:.6g}, max shift {shift:.3g}")
        if shift < config.convergence_tol:
            converged = True
            break
    costs.append(float(sum(warping_path(centre, member, spec)[1] for member in members)))
    centre.flags.writeable = False
    return BarycentreTrace(centre=centre, costs=tuple(costs), steps=steps, converged=converged)


def dba(
    cluster: Sequence[TimeSeries] | np.ndarray,
    config: Optional[BarycentreConfig] = None,
    initial: Optional[TimeSeries] = None,
    rng_seed: Optional[int | np.random.Generator] = None,
) -> TimeSeries:
    """DTW barycentre of the cluster. See `dba_trace`."""
    return dba_trace(cluster, config, initial=initial, rng_seed=rng_seed).centre
