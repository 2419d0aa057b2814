"""
Shared machinery of the partitional clusterers: initialisation, assignment,
empty-cluster repair, the assign/update loop, restarts and prediction.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from elastic_clust.clustering.models import ClusterModel, ClusteringConfig
from elastic_clust.distances.pairwise import as_matrix, pairwise_distance
from elastic_clust.distances.registry import DistanceFunction
from elastic_clust.errors import ClusteringConfigError, ShapeMismatchError
from elastic_clust.series import Dataset

logger = logging.getLogger(__name__)

# (labels, previous exemplars) -> new exemplars; exemplars are series for
# k-means and training indices for k-medoids
UpdateFn = Callable[[np.ndarray, Optional[np.ndarray]], np.ndarray]
# exemplars -> (n, k) distance matrix
DistanceToFn = Callable[[np.ndarray], np.ndarray]


@dataclass
class RestartResult:
    exemplars: np.ndarray
    labels: np.ndarray
    inertia: float
    iterations: int
    converged: bool
    inertia_history: list[float]
    sse_history: list[float]


def training_matrix(D: Dataset | np.ndarray, k: int) -> np.ndarray:
    """Series values to fit on. Labels, if any, are never read."""
    X = as_matrix(D)
    n = X.shape[0]
    if n == 0:
        raise ClusteringConfigError("Cannot cluster an empty dataset")
    if k > n:
        raise ClusteringConfigError(
            f"k={k} exceeds the number of series ({n})", details={"k": k, "n": n}
        )
    return X


def restart_generators(seed: int, restarts: int) -> list[np.random.Generator]:
    """Independent generators, one child stream of ``seed`` per restart."""
    children = np.random.SeedSequence(int(seed)).spawn(restarts)
    return [np.random.default_rng(child) for child in children]


def forgy_indices(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    return rng.choice(n, size=k, replace=False)


def random_partition(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Random labels with every cluster nonempty."""
    return rng.permutation(np.arange(n) % k).astype(np.int64)


def assign(dists: np.ndarray) -> np.ndarray:
    # np.argmin returns the first minimum: ties go to the lowest cluster id
    return np.argmin(dists, axis=1).astype(np.int64)


def repair_empty_clusters(labels: np.ndarray, dists: np.ndarray, k: int) -> np.ndarray:
    """
    Give each empty cluster the case farthest from its current exemplar.

    Only cases in clusters with more than one member are moved, so no repair
    empties another cluster. Ties go to the lowest case index.
    """
    labels = labels.copy()
    counts = np.bincount(labels, minlength=k)
    n = labels.shape[0]
    for c in np.flatnonzero(counts == 0):
        movable = counts[labels] > 1
        own = dists[np.arange(n), labels]
        own = np.where(movable, own, -np.inf)
        i = int(np.argmax(own))
        logger.warning(f"Cluster {c} is empty; moving case {i} from cluster {labels[i]}")
        counts[labels[i]] -= 1
        labels[i] = c
        counts[c] += 1
    return labels


def run_restart(
    n: int,
    k: int,
    max_iters: int,
    initial_exemplars: np.ndarray,
    distance_to: DistanceToFn,
    update: UpdateFn,
    restart: int = 0,
) -> RestartResult:
    """
    Alternate assignment and update until labels stop changing.

    The loop ends after an assignment step, so the returned labels are always
    nearest-exemplar labels (after repair) for the returned exemplars.
    """
    exemplars = initial_exemplars
    labels: Optional[np.ndarray] = None
    inertia_history: list[float] = []
    sse_history: list[float] = []
    converged = False
    iterations = 0
    rows = np.arange(n)
    inertia = 0.0
    for iterations in range(1, max_iters + 1):
        dists = distance_to(exemplars)
        new_labels = repair_empty_clusters(assign(dists), dists, k)
        own = dists[rows, new_labels]
        inertia = float(own.sum())
        inertia_history.append(inertia)
        sse_history.append(float(np.dot(own, own)))
        logger.debug(f"restart {restart} iteration {iterations}: inertia {inertia:.6g}")
        if labels is not None and np.array_equal(new_labels, labels):
            converged = True
            labels = new_labels
            break
        labels = new_labels
        if iterations == max_iters:
            break
        exemplars = update(labels, exemplars)
    return RestartResult(
        exemplars=exemplars,
        labels=labels,
        inertia=inertia,
        iterations=iterations,
        converged=converged,
        inertia_history=inertia_history,
        sse_history=sse_history,
    )


def best_of_restarts(
    run: Callable[[int, np.random.Generator], RestartResult], config: ClusteringConfig
) -> tuple[int, list[RestartResult]]:
    """
    Run every restart and pick the one with least inertia.

    Ties go to the lowest restart index, whatever order the threads finish in.
    """
    generators = restart_generators(config.seed, config.restarts)
    if config.threads > 1 and config.restarts > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(run, range(config.restarts), generators))
    else:
        results = [run(r, rng) for r, rng in enumerate(generators)]
    best = 0
    for r, result in enumerate(results):
        if result.inertia < results[best].inertia:
            best = r
    inertias = [round(r.inertia, 6) for r in results]
    logger.debug(f"restart inertias: {inertias}; chose restart {best}")
    return best, results


def build_model(
    config: ClusteringConfig, best: int, results: list[RestartResult], X: np.ndarray
) -> ClusterModel:
    chosen = results[best]
    medoids = None
    if config.clusterer == "kmedoids":
        medoids = np.asarray(chosen.exemplars, dtype=np.int64).copy()
        medoids.flags.writeable = False
        exemplars = np.array(X[medoids], dtype=np.float64)
    else:
        exemplars = np.array(chosen.exemplars, dtype=np.float64)
    exemplars.flags.writeable = False
    labels = chosen.labels.copy()
    labels.flags.writeable = False
    return ClusterModel(
        exemplars=exemplars,
        assignments=labels,
        inertia=chosen.inertia,
        iterations_run=chosen.iterations,
        converged=chosen.converged,
        distance=config.distance,
        clusterer=config.clusterer,
        averaging=config.averaging if config.clusterer == "kmeans" else "medoid",
        medoid_indices=medoids,
        inertia_history=tuple(chosen.inertia_history),
        sse_history=tuple(chosen.sse_history),
        restart_inertias=tuple(r.inertia for r in results),
        best_restart=best,
    )


def predict(model: ClusterModel, X: Dataset | np.ndarray, threads: int = 1) -> np.ndarray:
    """
    Nearest-exemplar cluster of each series under the model's distance.

    Raises:
        ShapeMismatchError: If the series length differs from the training length.
    """
    A = as_matrix(X)
    expected = int(model.exemplars.shape[1])
    if A.shape[0] and A.shape[1] != expected:
        raise ShapeMismatchError(
            f"Series length {A.shape[1]} differs from the training length {expected}",
            details={"length": int(A.shape[1]), "expected": expected},
        )
    if A.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    dists = pairwise_distance(A, model.exemplars, DistanceFunction(model.distance), threads=threads)
    return assign(dists)
