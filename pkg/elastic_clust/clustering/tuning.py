"""
Unsupervised DTW window selection with the Davies-Bouldin index.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from elastic_clust.clustering.models import ClusterModel, ClusteringConfig
from elastic_clust.errors import ClusteringConfigError, DegenerateClusteringError, ParameterError
from elastic_clust.metrics import davies_bouldin
from elastic_clust.series import Dataset

logger = logging.getLogger(__name__)

DEFAULT_WINDOWS = tuple(round(0.1 * i, 1) for i in range(10))
WINDOWED_DISTANCES = ("dtw", "ddtw")


@dataclass(frozen=True, eq=False)
class WindowTuningResult:
    """
    Attributes:
        window (float): The selected window.
        model (ClusterModel): The clustering fitted with it.
        scores (dict): Davies-Bouldin index per candidate window (nan when undefined).
        select (str): ``min`` or ``max``.
    """

    window: float
    model: ClusterModel
    scores: dict[float, float]
    select: str = "min"

    def __iter__(self):
        # allows ``window, model = tune_dtw_window(...)``
        return iter((self.window, self.model))


def tune_dtw_window(
    D: Dataset | np.ndarray,
    config: ClusteringConfig,
    windows: Optional[Sequence[float]] = None,
    select: str = "min",
) -> WindowTuningResult:
    """
    Fit once per candidate window and keep the best Davies-Bouldin score.

    Args:
        D: Training series.
        config (ClusteringConfig): Base settings; the window is replaced per fit.
            DBA averaging follows the candidate window too.
        windows: Candidates, default ``0.0, 0.1, ..., 0.9``.
        select (str): ``min`` picks the best separated clustering (lowest DB);
            ``max`` picks the highest score. Ties go to the smaller window.

    Raises:
        ClusteringConfigError: If the distance has no window.
        DegenerateClusteringError: If no candidate gives a defined score.
    """
    from elastic_clust.clustering import fit_clusterer

    if config.distance.name not in WINDOWED_DISTANCES:
        raise ClusteringConfigError(
            f"Window tuning needs a windowed distance ({', '.join(WINDOWED_DISTANCES)}), "
            f"got '{config.distance.name}'"
        )
    if select not in ("min", "max"):
        raise ParameterError(f"select must be 'min' or 'max', got '{select}'")
    candidates = sorted(float(w) for w in (DEFAULT_WINDOWS if windows is None else windows))
    X = D.X if isinstance(D, Dataset) else np.asarray(D, dtype=np.float64)

    scores: dict[float, float] = {}
    models: dict[float, ClusterModel] = {}
    best: Optional[float] = None
    for w in candidates:
        candidate = config.replace(distance=config.distance.with_params(window=w))
        if config.barycentre is not None:
            barycentre = dataclasses.replace(config.barycentre, window=w)
            candidate = candidate.replace(barycentre=barycentre)
        model = fit_clusterer(X, candidate)
        try:
            score = davies_bouldin(X, model.assignments)
        except DegenerateClusteringError as e:
            logger.warning(f"window {w}: Davies-Bouldin undefined ({e.message})")
            score = math.nan
        scores[w] = score
        models[w] = model
        logger.debug(f"window {w}: Davies-Bouldin {score:.6g}")
        if math.isnan(score):
            continue
        if best is None or (score < scores[best] if select == "min" else score > scores[best]):
            best = w

    if best is None:
        raise DegenerateClusteringError("Davies-Bouldin index undefined for every candidate window")
    logger.info(f"Selected window {best} (Davies-Bouldin {scores[best]:.6g}, select={select})")
    return WindowTuningResult(window=best, model=models[best], scores=scores, select=select)
