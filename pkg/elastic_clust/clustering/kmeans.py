"""
k-means with arithmetic-mean or DBA centroids under any registered distance.
"""

from __future__ import annotations

import logging
import time
from typing import Optional

import numpy as np

from elastic_clust.averaging import dba
from elastic_clust.clustering._base import (
    RestartResult,
    best_of_restarts,
    build_model,
    forgy_indices,
    random_partition,
    run_restart,
    training_matrix,
)
from elastic_clust.clustering.models import ClusterModel, ClusteringConfig
from elastic_clust.distances.registry import resolve_distance
from elastic_clust.series import Dataset

logger = logging.getLogger(__name__)


def _centroids(
    X: np.ndarray,
    labels: np.ndarray,
    previous: Optional[np.ndarray],
    config: ClusteringConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    centroids = np.empty((config.k, X.shape[1]))
    for c in range(config.k):
        members = X[labels == c]
        if config.averaging == "dba":
            # refine from the previous centroid when there is one
            initial = None if previous is None else previous[c]
            centroids[c] = dba(members, config.barycentre_config, initial=initial, rng_seed=rng)
        else:
            centroids[c] = members.mean(axis=0)
    return centroids


def kmeans_fit(D: Dataset | np.ndarray, config: ClusteringConfig) -> ClusterModel:
    """
    Fit k-means with ``config.restarts`` seeded restarts.

    Each restart alternates nearest-centroid assignment (ties to the lowest
    cluster id) with centroid updates until the assignments repeat or
    ``max_iters`` assignment steps have run. The restart with the least
    inertia is returned; ties go to the lowest restart index.

    Args:
        D: Training series. Labels are ignored.
        config (ClusteringConfig): Run settings.

    Returns:
        ClusterModel: The best restart.

    Raises:
        ClusteringConfigError: If the dataset is empty or ``k`` exceeds its size.
    """
    if config.clusterer != "kmeans":
        config = config.replace(clusterer="kmeans")
    X = training_matrix(D, config.k)
    n, k = X.shape[0], config.k
    fn = resolve_distance(config.distance)
    Xp = fn.prepare_many(X)

    def distance_to(centroids: np.ndarray) -> np.ndarray:
        Cp = fn.prepare_many(centroids)
        return np.array([[fn.raw(x, c) for c in Cp] for x in Xp])

    def run(restart: int, rng: np.random.Generator) -> RestartResult:
        def update(labels: np.ndarray, previous: Optional[np.ndarray]) -> np.ndarray:
            return _centroids(X, labels, previous, config, rng)

        if config.init == "forgy":
            initial = X[forgy_indices(n, k, rng)].copy()
        else:
            initial = update(random_partition(n, k, rng), None)
        return run_restart(n, k, config.max_iters, initial, distance_to, update, restart=restart)

    started = time.perf_counter()
    best, results = best_of_restarts(run, config)
    model = build_model(config, best, results, X)
    logger.info(
        f"{config.algorithm_name} k={k}: inertia {model.inertia:.6g} after {model.iterations_run} "
        f"iterations (restart {best} of {config.restarts}, converged={model.converged}) "
        f"in {time.perf_counter() - started:.3f}s"
    )
    return model
