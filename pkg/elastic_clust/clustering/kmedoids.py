"""
k-medoids over a precomputed distance matrix.

The medoid of a cluster is the member with the least total distance to the
other members, found by full enumeration (no PAM swap search).
"""

from __future__ import annotations

import logging
import time
from typing import Optional

import numpy as np

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
from elastic_clust.distances.pairwise import pairwise_distance
from elastic_clust.distances.registry import resolve_distance
from elastic_clust.errors import ElasticClustError
from elastic_clust.series import Dataset

logger = logging.getLogger(__name__)


def medoid_indices(
    P: np.ndarray, labels: np.ndarray, k: int, previous: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Exact medoid of every cluster from the full distance matrix ``P``.

    Ties go to the lowest case index.
    """
    medoids = np.empty(k, dtype=np.int64)
    for c in range(k):
        members = np.flatnonzero(labels == c)
        totals = P[np.ix_(members, members)].sum(axis=1)
        best = int(np.argmin(totals))
        medoids[c] = members[best]
        if previous is not None and previous[c] in members:
            check_medoid_update(c, float(P[previous[c], members].sum()), float(totals[best]))
    return medoids


def check_medoid_update(cluster: int, old_total: float, new_total: float) -> None:
    """
    Raises:
        ElasticClustError: If a medoid update increased the total distance of its cluster.
    """
    if new_total > old_total + 1e-9 * max(1.0, abs(old_total)):
        logger.warning(
            f"Medoid update for cluster {cluster} increased the total distance "
            f"({old_total:.6g} -> {new_total:.6g})"
        )
        raise ElasticClustError(
            f"k-medoids update increased the total distance of cluster {cluster}",
            details={"cluster": cluster, "before": old_total, "after": new_total},
        )


def kmedoids_fit(
    D: Dataset | np.ndarray, config: ClusteringConfig, distances: Optional[np.ndarray] = None
) -> ClusterModel:
    """
    Fit k-medoids with ``config.restarts`` seeded restarts.

    The ``n x n`` distance matrix is computed once (with ``config.threads``
    workers) and shared by every restart, unless ``distances`` supplies it.
    Assignment, convergence and restart selection follow `kmeans_fit`.

    Raises:
        ClusteringConfigError: If the dataset is empty or ``k`` exceeds its size.
    """
    if config.clusterer != "kmedoids":
        config = config.replace(clusterer="kmedoids")
    X = training_matrix(D, config.k)
    n, k = X.shape[0], config.k
    started = time.perf_counter()
    if distances is None:
        P = pairwise_distance(X, spec=resolve_distance(config.distance), threads=config.threads)
    else:
        P = np.asarray(distances, dtype=np.float64)
    elapsed = time.perf_counter() - started
    logger.debug(f"kmedoids distance matrix {P.shape} ready in {elapsed:.3f}s")

    def distance_to(medoids: np.ndarray) -> np.ndarray:
        return P[:, medoids]

    def update(labels: np.ndarray, previous: Optional[np.ndarray]) -> np.ndarray:
        return medoid_indices(P, labels, k, previous)

    def run(restart: int, rng: np.random.Generator) -> RestartResult:
        if config.init == "forgy":
            initial = forgy_indices(n, k, rng)
        else:
            initial = update(random_partition(n, k, rng), None)
        return run_restart(n, k, config.max_iters, initial, distance_to, update, restart=restart)

    best, results = best_of_restarts(run, config)
    model = build_model(config, best, results, X)
    logger.info(
        f"{config.algorithm_name} k={k}: inertia {model.inertia:.6g} after {model.iterations_run} "
        f"iterations (restart {best} of {config.restarts}, converged={model.converged}) "
        f"in {time.perf_counter() - started:.3f}s"
    )
    return model
