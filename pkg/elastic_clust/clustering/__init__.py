"""
Partitional clusterers: k-means (mean or DBA averaging) and k-medoids.
"""

from __future__ import annotations

import numpy as np

from elastic_clust.clustering._base import predict
from elastic_clust.clustering.kmeans import kmeans_fit
from elastic_clust.clustering.kmedoids import kmedoids_fit
from elastic_clust.clustering.models import (
    AVERAGING_METHODS,
    CLUSTERERS,
    INIT_METHODS,
    ClusterModel,
    ClusteringConfig,
)
from elastic_clust.clustering.tuning import DEFAULT_WINDOWS, WindowTuningResult, tune_dtw_window
from elastic_clust.series import Dataset


def fit_clusterer(D: Dataset | np.ndarray, config: ClusteringConfig) -> ClusterModel:
    """Fit the clusterer ``config.clusterer`` names."""
    if config.clusterer == "kmedoids":
        return kmedoids_fit(D, config)
    return kmeans_fit(D, config)


__all__ = [
    "AVERAGING_METHODS",
    "CLUSTERERS",
    "DEFAULT_WINDOWS",
    "INIT_METHODS",
    "ClusterModel",
    "ClusteringConfig",
    "WindowTuningResult",
    "fit_clusterer",
    "kmeans_fit",
    "kmedoids_fit",
    "predict",
    "tune_dtw_window",
]
