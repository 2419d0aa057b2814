"""
elastic_clust: elastic time-series distances and distance-based clustering.
"""

import logging
import os
from dataclasses import dataclass, field
from pprint import pformat
from typing import Any, Optional

import config
from .logging_setup import configure_logging

from elastic_clust.averaging import BarycentreConfig, dba, mean_average
from elastic_clust.clustering import (
    ClusterModel,
    ClusteringConfig,
    fit_clusterer,
    predict,
    tune_dtw_window,
)
from elastic_clust.distances import (
    DistanceSpec,
    alignment_path,
    distance,
    pairwise_distance,
    resolve_distance,
)
from elastic_clust.errors import ElasticClustError
from elastic_clust.metrics import davies_bouldin, evaluate_labels
from elastic_clust.series import Dataset, derivative_transform, z_normalize


@dataclass
class Toolkit:
    """
    Resolved settings for one process.

    Attributes:
        env (str): Name of the selected configuration.
        settings (dict): Upper-case configuration values.
        logger (logging.Logger): The configured root logger.
    """

    env: str
    settings: dict[str, Any] = field(default_factory=dict)
    logger: Optional[logging.Logger] = None

    def __getitem__(self, key: str) -> Any:
        return self.settings[key]

    def get(self, key: str, default: Any = None) -> Any:
        return self.settings.get(key, default)


def create_toolkit(env: Optional[str] = None, log_level: Optional[str] = None) -> Toolkit:
    """
    Select a configuration class, configure logging and return the settings.

    The configuration is chosen by ``env``, else ``ELASTIC_CLUST_ENV``, else
    production.

    Args:
        env (str, optional): ``production``, ``development`` or ``testing``.
        log_level (str, optional): Overrides the configured level.

    Raises:
        ElasticClustError: If the environment name is unknown.
    """
    env = (env or os.getenv("ELASTIC_CLUST_ENV") or "production").lower()
    if env not in config.CONFIGS:
        raise ElasticClustError(
            f"Unknown environment '{env}'. Known: {', '.join(config.CONFIGS)}", details={"env": env}
        )
    conf = config.CONFIGS[env]()
    settings = {key: getattr(conf, key) for key in dir(conf) if key.isupper()}
    if log_level:
        settings["LOG_LEVEL"] = log_level.upper()
    if settings.get("APP_VERSION") is None:
        from version import __version__

        settings["APP_VERSION"] = __version__

    logger = configure_logging(settings["LOG_LEVEL"], settings["LOG_FILE"])
    logger.debug(f"Loaded {env} configuration:")
    logger.debug(pformat(settings))
    return Toolkit(env=env, settings=settings, logger=logger)


__all__ = [
    "BarycentreConfig",
    "ClusterModel",
    "ClusteringConfig",
    "Dataset",
    "DistanceSpec",
    "Toolkit",
    "alignment_path",
    "create_toolkit",
    "davies_bouldin",
    "dba",
    "derivative_transform",
    "distance",
    "evaluate_labels",
    "fit_clusterer",
    "mean_average",
    "pairwise_distance",
    "predict",
    "resolve_distance",
    "tune_dtw_window",
    "z_normalize",
]
