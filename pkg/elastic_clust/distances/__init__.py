"""
Elastic distance measures, cost matrices, alignment paths and pairwise matrices.
"""

from elastic_clust.distances.spec import DISTANCE_NAMES, DistanceSpec
from elastic_clust.distances.registry import (
    DistanceFunction,
    available_distances,
    get_measure,
    register,
    resolve_distance,
)
from elastic_clust.distances.alignment import AlignmentPath, CostMatrix
from elastic_clust.distances.elastic import (
    alignment_path,
    band_radius,
    cost_matrix,
    ddtw,
    distance,
    dtw,
    dtw_alignment_path,
    dtw_cost_matrix,
    edr,
    erp,
    euclidean,
    lcss,
    lcss_match_length,
    msm,
    msm_cost,
    twe,
    wddtw,
    wdtw,
    wdtw_weights,
)
from elastic_clust.distances.pairwise import as_matrix, pairwise_distance

__all__ = [
    "DISTANCE_NAMES",
    "AlignmentPath",
    "CostMatrix",
    "DistanceFunction",
    "DistanceSpec",
    "alignment_path",
    "as_matrix",
    "available_distances",
    "band_radius",
    "cost_matrix",
    "ddtw",
    "distance",
    "dtw",
    "dtw_alignment_path",
    "dtw_cost_matrix",
    "edr",
    "erp",
    "euclidean",
    "get_measure",
    "lcss",
    "lcss_match_length",
    "msm",
    "msm_cost",
    "pairwise_distance",
    "register",
    "resolve_distance",
    "twe",
    "wddtw",
    "wdtw",
    "wdtw_weights",
]
