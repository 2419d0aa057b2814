"""
Clustering configuration and fitted model types.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from elastic_clust.averaging import BarycentreConfig
from elastic_clust.distances.spec import DistanceSpec
from elastic_clust.errors import ClusteringConfigError

CLUSTERERS = ("kmeans", "kmedoids")
AVERAGING_METHODS = ("mean", "dba")
INIT_METHODS = ("forgy", "random_partition")


@dataclass(frozen=True)
class ClusteringConfig:
    """
    Settings for one partitional clustering run.

    Attributes:
        k (int): Number of clusters.
        clusterer (str): ``kmeans`` or ``kmedoids``.
        averaging (str): ``mean`` or ``dba``; read by k-means only.
        distance (DistanceSpec): Assignment distance. A measure name is accepted
            and expanded with default parameters.
        max_iters (int): Assignment steps per restart.
        restarts (int): Independent seeded initialisations.
        seed (int): Root seed; restart ``r`` draws from the ``r``-th child stream.
        init (str): ``forgy`` (k distinct cases as exemplars) or
            ``random_partition`` (random balanced labels, then update).
        threads (int): Worker threads; restarts run in parallel when above 1.
        barycentre (BarycentreConfig, optional): DBA settings. Defaults to the
            assignment distance's window.
    """

    k: int
    clusterer: str = "kmeans"
    averaging: str = "mean"
    distance: DistanceSpec = field(default_factory=lambda: DistanceSpec("dtw"))
    max_iters: int = 300
    restarts: int = 10
    seed: int = 1
    init: str = "forgy"
    threads: int = 1
    barycentre: Optional[BarycentreConfig] = None

    def __post_init__(self) -> None:
        if isinstance(self.distance, str):
            object.__setattr__(self, "distance", DistanceSpec.create(self.distance))
        if self.clusterer not in CLUSTERERS:
            raise ClusteringConfigError(
                f"Unknown clusterer '{self.clusterer}'. Known: {', '.join(CLUSTERERS)}"
            )
        if self.averaging not in AVERAGING_METHODS:
            raise ClusteringConfigError(
                f"Unknown averaging '{self.averaging}'. Known: {', '.join(AVERAGING_METHODS)}"
            )
        if self.init not in INIT_METHODS:
            raise ClusteringConfigError(
                f"Unknown init '{self.init}'. Known: {', '.join(INIT_METHODS)}"
            )
        for name in ("k", "max_iters", "restarts", "threads"):
            if int(getattr(self, name)) < 1:
                raise ClusteringConfigError(f"{name} must be at least 1, got {getattr(self, name)}")

    @property
    def barycentre_config(self) -> BarycentreConfig:
        if self.barycentre is not None:
            return self.barycentre
        return BarycentreConfig(window=self.distance.window)

    @property
    def algorithm_name(self) -> str:
        """``kmeans-dtw``, ``kmeans-dba-dtw`` or ``kmedoids-msm`` style label."""
        if self.clusterer == "kmeans" and self.averaging == "dba":
            return f"kmeans-dba-{self.distance.name}"
        return f"{self.clusterer}-{self.distance.name}"

    def replace(self, **changes) -> "ClusteringConfig":
        return dataclasses.replace(self, **changes)

    def to_param_string(self) -> str:
        """The distance parameters followed by the clustering settings, ``;``-joined."""
        parts = [
            self.distance.to_param_string(),
            f"clusterer={self.clusterer}",
            f"averaging={self.averaging}",
            f"k={self.k}",
            f"init={self.init}",
            f"max_iters={self.max_iters}",
            f"restarts={self.restarts}",
        ]
        if self.clusterer == "kmeans" and self.averaging == "dba":
            bc = self.barycentre_config
            parts.append(
                f"dba_max_refinements={bc.max_refinements};dba_tol={bc.convergence_tol!r};"
                f"dba_window={bc.window!r}"
            )
        return ";".join(parts)


@dataclass(frozen=True, eq=False)
class ClusterModel:
    """
    A fitted partition.

    Attributes:
        exemplars (np.ndarray): ``(k, m)`` centroids, or the medoid series for
            k-medoids.
        assignments (np.ndarray): Cluster id in ``[0, k)`` per training case.
        inertia (float): Sum of distances from each case to its exemplar.
        iterations_run (int): Assignment steps of the chosen restart.
        converged (bool): Whether assignments stopped changing.
        distance (DistanceSpec): The assignment distance, used by `predict`.
        medoid_indices (np.ndarray, optional): Training indices of the medoids.
        inertia_history (tuple): Inertia after each assignment step.
        sse_history (tuple): Sum of squared distances after each assignment step.
        restart_inertias (tuple): Final inertia of every restart.
        best_restart (int): Index of the chosen restart.
    """

    exemplars: np.ndarray
    assignments: np.ndarray
    inertia: float
    iterations_run: int
    converged: bool
    distance: DistanceSpec
    clusterer: str = "kmeans"
    averaging: str = "mean"
    medoid_indices: Optional[np.ndarray] = None
    inertia_history: tuple[float, ...] = ()
    sse_history: tuple[float, ...] = ()
    restart_inertias: tuple[float, ...] = ()
    best_restart: int = 0

    @property
    def k(self) -> int:
        return int(self.exemplars.shape[0])

    @property
    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)

    def predict(self, X, threads: int = 1) -> np.ndarray:
        from elastic_clust.clustering._base import predict

        return predict(self, X, threads=threads)
