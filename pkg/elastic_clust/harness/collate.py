"""
Collating results files into per-metric tables.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from elastic_clust.errors import ResultsFormatError
from elastic_clust.harness.results import (
    METRIC_FIELDS,
    EvalReport,
    find_results_files,
    read_results,
)
from elastic_clust.metrics import single_cluster_accuracy
from elastic_clust.stats import ResultsTable

logger = logging.getLogger(__name__)

TABLE_METRICS = tuple(name for name in METRIC_FIELDS if not name.endswith("_ms"))


def load_reports(roots: Iterable[str], split: str = "test") -> list[EvalReport]:
    """Parse every ``<split>Resample*.csv`` under the given directories or files."""
    reports = []
    for root in roots:
        for path in find_results_files(root, split=split):
            try:
                report = read_results(path)
            except (ResultsFormatError, OSError, UnicodeDecodeError) as e:
                logger.warning(f"Skipping unreadable results file {path}: {e}")
                continue
            if report.split != split:
                continue
            reports.append(report)
    return reports


def collate_results(
    roots: Iterable[str], split: str = "test", metrics: Optional[Iterable[str]] = None
) -> dict[str, ResultsTable]:
    """
    One table per metric, datasets by algorithms.

    Scores are averaged over resamples. Datasets missing a result for any
    algorithm are dropped with a warning. Each table carries the
    single-cluster accuracy of every dataset as its baseline.

    Raises:
        ResultsFormatError: If no results file could be parsed.
    """
    roots = list(roots)
    reports = load_reports(roots, split=split)
    if not reports:
        raise ResultsFormatError(f"No {split} results files found under {', '.join(roots)}")
    metrics = tuple(metrics) if metrics is not None else TABLE_METRICS

    values: dict[tuple[str, str], dict[str, list[float]]] = defaultdict(lambda: defaultdict(list))
    baseline: dict[str, float] = {}
    for report in reports:
        cell = values[(report.dataset, report.clusterer)]
        for name in metrics:
            cell[name].append(getattr(report, name))
        if report.dataset not in baseline and report.true_labels:
            baseline[report.dataset] = single_cluster_accuracy(list(report.true_labels))
    logger.info(
        f"Collated {len(reports)} {split} results files: "
        f"{len({d for d, _ in values})} datasets, {len({a for _, a in values})} algorithms"
    )

    baseline_series = pd.Series(baseline, dtype=np.float64)
    tables = {}
    for name in metrics:
        frame = pd.Series(
            {key: float(np.mean(cell[name])) for key, cell in values.items()}, dtype=np.float64
        ).unstack()
        tables[name] = ResultsTable.from_frame(frame, metric=name, baseline=baseline_series)
    return tables
