"""
Results files.

One file per (algorithm, dataset, split, resample), CSV, UTF-8, LF endings::

    dataset,clusterer,split,resample,seed
    metric=dtw;c=1.0;...;clusterer=kmeans;k=2;...
    clacc,ri,ari,mi,nmi,ami,db,fit_ms,predict_ms
    true_label,assigned_cluster
    ...

Line 1 and line 3 hold values, not column names. Reals are written with six
significant digits; undefined values as ``nan``. The per-case rows carry
enough to recompute every supervised metric.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
from dataclasses import dataclass
from typing import Optional

from elastic_clust.errors import OverwriteRefusedError, ResultsFormatError
from elastic_clust.metrics import SUPERVISED_METRICS, evaluate_labels

logger = logging.getLogger(__name__)

HEADER_FIELDS = ("dataset", "clusterer", "split", "resample", "seed")
METRIC_FIELDS = ("clacc", "ri", "ari", "mi", "nmi", "ami", "db", "fit_ms", "predict_ms")
SPLITS = ("train", "test")


def format_real(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    return f"{float(value):.6g}"


def results_path(out_dir: str, algorithm: str, dataset: str, split: str, resample: int) -> str:
    """``<out>/<algorithm>/<dataset>/<split>Resample<r>.csv``."""
    return os.path.join(out_dir, algorithm, dataset, f"{split}Resample{resample}.csv")


@dataclass(frozen=True, eq=False)
class EvalReport:
    """Evaluation of one split: header fields, metrics and per-case rows."""

    dataset: str
    clusterer: str
    split: str
    resample: int
    seed: int
    parameters: str
    clacc: float
    ri: float
    ari: float
    mi: float
    nmi: float
    ami: float
    db: float
    fit_ms: float
    predict_ms: float
    true_labels: tuple[str, ...]
    assigned: tuple[int, ...]

    @property
    def metrics(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_FIELDS}

    def recompute(self) -> dict[str, float]:
        """Supervised metrics recomputed from the per-case rows."""
        return evaluate_labels(list(self.true_labels), list(self.assigned))

    def mismatches(self) -> dict[str, tuple[float, float]]:
        """
        Supervised metrics whose recomputed value, at the file's precision,
        differs from the stored one.
        """
        out = {}
        for name, value in self.recompute().items():
            stored = getattr(self, name)
            if math.isnan(value) and math.isnan(stored):
                continue
            rounded = float(format_real(value))
            if rounded != stored:
                out[name] = (stored, value)
        return out

    def to_text(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([self.dataset, self.clusterer, self.split, self.resample, self.seed])
        buffer.write(self.parameters + "\n")
        writer.writerow([format_real(getattr(self, name)) for name in METRIC_FIELDS])
        writer.writerows(zip(self.true_labels, self.assigned))
        return buffer.getvalue()


def build_report(
    dataset: str,
    clusterer: str,
    split: str,
    resample: int,
    seed: int,
    parameters: str,
    true_labels,
    assigned,
    db: float,
    fit_ms: float = 0.0,
    predict_ms: float = 0.0,
) -> EvalReport:
    """Evaluate the supervised metrics and bundle them with the per-case rows."""
    true_labels = tuple(str(label) for label in true_labels)
    assigned = tuple(int(c) for c in assigned)
    metrics = evaluate_labels(list(true_labels), list(assigned))
    return EvalReport(
        dataset=dataset,
        clusterer=clusterer,
        split=split,
        resample=int(resample),
        seed=int(seed),
        parameters=parameters,
        db=float(db),
        fit_ms=float(fit_ms),
        predict_ms=float(predict_ms),
        true_labels=true_labels,
        assigned=assigned,
        **{name: float(metrics[name]) for name in SUPERVISED_METRICS},
    )


def write_results(report: EvalReport, path: str, overwrite: bool = False) -> str:
    """
    Write a results file.

    Raises:
        OverwriteRefusedError: If ``path`` exists and ``overwrite`` is False.
    """
    if os.path.exists(path) and not overwrite:
        raise OverwriteRefusedError(
            f"Results file exists: {path} (pass overwrite to replace it)", details={"path": path}
        )
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.to_text())
    logger.info(f"Wrote {path}")
    return path


def _real(token: str, path: str, field: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ResultsFormatError(f"{path}: {field} is not a number: '{token}'") from None


def parse_results(text: str, path: str = "<results>") -> EvalReport:
    lines = text.splitlines()
    if len(lines) < 3:
        raise ResultsFormatError(f"{path}: expected at least three lines, got {len(lines)}")
    rows = list(csv.reader([lines[0], lines[2]]))
    header, metrics = rows
    if len(header) != len(HEADER_FIELDS):
        raise ResultsFormatError(f"{path}: line 1 must hold {','.join(HEADER_FIELDS)}")
    if len(metrics) != len(METRIC_FIELDS):
        raise ResultsFormatError(f"{path}: line 3 must hold {','.join(METRIC_FIELDS)}")
    if header[2] not in SPLITS:
        raise ResultsFormatError(f"{path}: unknown split '{header[2]}'")
    true_labels, assigned = [], []
    for line_number, row in enumerate(csv.reader(lines[3:]), start=4):
        if not row:
            continue
        if len(row) != 2:
            raise ResultsFormatError(f"{path}:{line_number}: expected true_label,assigned_cluster")
        true_labels.append(row[0])
        try:
            assigned.append(int(row[1]))
        except ValueError:
            raise ResultsFormatError(
                f"{path}:{line_number}: cluster id '{row[1]}' is not an integer"
            ) from None
    try:
        resample, seed = int(header[3]), int(header[4])
    except ValueError:
        raise ResultsFormatError(f"{path}: resample and seed must be integers") from None
    return EvalReport(
        dataset=header[0],
        clusterer=header[1],
        split=header[2],
        resample=resample,
        seed=seed,
        parameters=lines[1],
        true_labels=tuple(true_labels),
        assigned=tuple(assigned),
        **{name: _real(token, path, name) for name, token in zip(METRIC_FIELDS, metrics)},
    )


def read_results(path: str) -> EvalReport:
    with open(path, encoding="utf-8") as fh:
        return parse_results(fh.read(), path=path)


def find_results_files(root: str, split: Optional[str] = None) -> list[str]:
    """Results files under ``root`` (or ``root`` itself), sorted."""
    if os.path.isfile(root):
        return [root]
    found = []
    for directory, _, files in os.walk(root):
        for name in files:
            if not name.endswith(".csv") or "Resample" not in name:
                continue
            if split is not None and not name.startswith(f"{split}Resample"):
                continue
            found.append(os.path.join(directory, name))
    return sorted(found)
