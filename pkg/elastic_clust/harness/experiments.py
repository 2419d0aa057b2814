"""
Train/test clustering experiments.

A run fits on the train split, scores the train assignments, predicts the
test split with the trained exemplars, scores those, and writes one results
file per split. Runs are deterministic: the seed is ``base_seed + resample``
and runtimes are written only when requested (they are always logged).
"""

from __future__ import annotations

import dataclasses
import logging
import math
import os
import time
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from elastic_clust.averaging import BarycentreConfig
from elastic_clust.clustering import (
    ClusterModel,
    ClusteringConfig,
    fit_clusterer,
    predict,
    tune_dtw_window,
)
from elastic_clust.distances.spec import DistanceSpec
from elastic_clust.errors import (
    DegenerateClusteringError,
    OverwriteRefusedError,
    UnsupportedDatasetError,
)
from elastic_clust.harness.results import EvalReport, build_report, results_path, write_results
from elastic_clust.harness.ucr import load_ucr_dataset, min_class_size
from elastic_clust.metrics import davies_bouldin
from elastic_clust.series import Dataset

logger = logging.getLogger(__name__)


def experiment_seed(base_seed: int, resample: int) -> int:
    return int(base_seed) + int(resample)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything one experiment run needs.

    Attributes:
        train_path (str): Train split file.
        test_path (str, optional): Test split file; without it only train
            results are written.
        distance (DistanceSpec): Clustering distance.
        clusterer (str): ``kmeans`` or ``kmedoids``.
        averaging (str): ``mean`` or ``dba`` (k-means only).
        k (int, optional): Clusters; defaults to the number of train classes.
        max_iters, restarts, init, threads: As in `ClusteringConfig`.
        normalize (bool): z-normalise every series before fitting.
        resample (int): Resample id; the seed is ``base_seed + resample``.
        base_seed (int): Seed offset.
        out_dir (str): Root of the results tree.
        overwrite (bool): Replace existing results files.
        tune_window (bool): Pick the DTW window by Davies-Bouldin index.
        db_select (str): ``min`` (lowest index) or ``max`` when tuning.
        record_timing (bool): Write measured runtimes instead of 0.
        barycentre (BarycentreConfig, optional): DBA settings.
    """

    train_path: str
    test_path: Optional[str] = None
    distance: DistanceSpec = field(default_factory=lambda: DistanceSpec("dtw"))
    clusterer: str = "kmeans"
    averaging: str = "mean"
    k: Optional[int] = None
    max_iters: int = 300
    restarts: int = 10
    init: str = "forgy"
    threads: int = 1
    normalize: bool = True
    resample: int = 0
    base_seed: int = 1
    out_dir: str = "results"
    overwrite: bool = False
    tune_window: bool = False
    db_select: str = "min"
    record_timing: bool = False
    barycentre: Optional[BarycentreConfig] = None

    @property
    def seed(self) -> int:
        return experiment_seed(self.base_seed, self.resample)

    def clustering_config(self, k: int) -> ClusteringConfig:
        return ClusteringConfig(
            k=k,
            clusterer=self.clusterer,
            averaging=self.averaging,
            distance=self.distance,
            max_iters=self.max_iters,
            restarts=self.restarts,
            seed=self.seed,
            init=self.init,
            threads=self.threads,
            barycentre=self.barycentre,
        )

    def algorithm_name(self, k: int) -> str:
        name = self.clustering_config(k).algorithm_name
        return f"{name}-tuned" if self.tune_window else name

    def replace(self, **changes: Any) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    train: EvalReport
    test: Optional[EvalReport]
    model: ClusterModel
    paths: tuple[str, ...]
    window: Optional[float] = None


def _db_or_nan(D: Dataset, assignments: np.ndarray) -> float:
    try:
        return davies_bouldin(D, assignments)
    except DegenerateClusteringError as e:
        logger.info(f"{D.name}: Davies-Bouldin undefined ({e.message})")
        return math.nan


def check_supported(train: Dataset) -> None:
    """
    Reject train splits the protocol excludes.

    Raises:
        UnsupportedDatasetError: Unlabelled data, or a class with a single case.
    """
    if train.labels is None:
        raise UnsupportedDatasetError(f"{train.name}: train split has no class labels")
    if min_class_size(train) < 2:
        raise UnsupportedDatasetError(f"{train.name}: a class has a single train case")


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Fit on train, evaluate on train and test, write the results files.

    Raises:
        OverwriteRefusedError: A results file exists and ``overwrite`` is off.
            Nothing is fitted or written.
        ClusteringConfigError: ``k`` exceeds the number of train series.
        DatasetError: Propagated from loading.
    """
    train = load_ucr_dataset(cfg.train_path)
    test = load_ucr_dataset(cfg.test_path, name=train.name) if cfg.test_path else None
    check_supported(train)
    if cfg.normalize:
        train = train.z_normalized()
        test = test.z_normalized() if test is not None else None

    k = cfg.k or len(train.classes)
    algorithm = cfg.algorithm_name(k)
    splits = ["train"] + (["test"] if test is not None else [])
    paths = {
        split: results_path(cfg.out_dir, algorithm, train.name, split, cfg.resample)
        for split in splits
    }
    if not cfg.overwrite:
        for path in paths.values():
            if os.path.exists(path):
                raise OverwriteRefusedError(
                    f"Results file exists: {path} (pass overwrite to replace it)",
                    details={"path": path},
                )

    config = cfg.clustering_config(k)
    logger.info(
        f"Experiment {algorithm} on {train.name} "
        f"(n={train.n_cases}, m={train.series_length}, k={k}, seed={cfg.seed})"
    )
    started = time.perf_counter()
    window = None
    if cfg.tune_window:
        tuned = tune_dtw_window(train.without_labels(), config, select=cfg.db_select)
        model, window = tuned.model, tuned.window
        config = config.replace(distance=config.distance.with_params(window=window))
        if config.barycentre is not None:
            barycentre = dataclasses.replace(config.barycentre, window=window)
            config = config.replace(barycentre=barycentre)
    else:
        model = fit_clusterer(train.without_labels(), config)
    fit_ms = (time.perf_counter() - started) * 1000.0

    parameters = f"{config.to_param_string()};normalize={'true' if cfg.normalize else 'false'}"
    if cfg.tune_window:
        parameters += f";tuned_window={window!r};db_select={cfg.db_select}"

    def timing(value: float) -> float:
        return value if cfg.record_timing else 0.0

    train_report = build_report(
        dataset=train.name,
        clusterer=algorithm,
        split="train",
        resample=cfg.resample,
        seed=cfg.seed,
        parameters=parameters,
        true_labels=train.labels,
        assigned=model.assignments,
        db=_db_or_nan(train, model.assignments),
        fit_ms=timing(fit_ms),
    )
    written = [write_results(train_report, paths["train"], overwrite=cfg.overwrite)]

    test_report = None
    predict_ms = 0.0
    if test is not None:
        started = time.perf_counter()
        assigned = predict(model, test, threads=cfg.threads)
        predict_ms = (time.perf_counter() - started) * 1000.0
        test_report = build_report(
            dataset=train.name,
            clusterer=algorithm,
            split="test",
            resample=cfg.resample,
            seed=cfg.seed,
            parameters=parameters,
            true_labels=test.labels if test.labels is not None else ["?"] * test.n_cases,
            assigned=assigned,
            db=_db_or_nan(test, assigned),
            fit_ms=timing(fit_ms),
            predict_ms=timing(predict_ms),
        )
        written.append(write_results(test_report, paths["test"], overwrite=cfg.overwrite))

    logger.info(
        f"{algorithm} on {train.name}: train CL-ACC {train_report.clacc:.4f}"
        + (f", test CL-ACC {test_report.clacc:.4f}" if test_report else "")
        + f"; fit {fit_ms:.1f} ms, predict {predict_ms:.1f} ms"
    )
    return ExperimentResult(
        train=train_report, test=test_report, model=model, paths=tuple(written), window=window
    )
