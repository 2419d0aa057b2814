"""
Clustering evaluation metrics.

Supervised metrics compare a predicted partition with the true classes via
their contingency table: clustering accuracy (CL-ACC), Rand index (RI),
adjusted Rand index (ARI), mutual information (MI) and its normalised (NMI)
and adjusted (AMI) forms. The Davies-Bouldin index scores a partition without
labels.

Logarithms are natural throughout. Entropy-type sums are accumulated with
``math.fsum`` so that identical partitions give NMI and AMI of exactly 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import gammaln

from elastic_clust.errors import DegenerateClusteringError, ParameterError, ShapeMismatchError
from elastic_clust.series import Dataset

logger = logging.getLogger(__name__)

SUPERVISED_METRICS = ("clacc", "ri", "ari", "mi", "nmi", "ami")


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """
    Cross-tabulation of predicted clusters (rows) against true classes (columns).

    Attributes:
        counts (np.ndarray): ``(k_pred, k_true)`` integer counts.
        clusters (tuple): Predicted label values, one per row, sorted.
        classes (tuple): True label values, one per column, sorted.
    """

    counts: np.ndarray
    clusters: tuple
    classes: tuple

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def cluster_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def class_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def is_one_to_one(self) -> bool:
        """True when the two partitions are equal up to relabelling."""
        nonzero = self.counts > 0
        return bool(np.all(nonzero.sum(axis=0) == 1) and np.all(nonzero.sum(axis=1) == 1))


def _encode(labels: Sequence) -> np.ndarray:
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ShapeMismatchError(f"Labels must be one-dimensional, got shape {arr.shape}")
    if arr.dtype == object:
        arr = arr.astype(str)
    return arr


def contingency_table(y_true: Sequence, y_pred: Sequence) -> ContingencyTable:
    """
    Build the contingency table of two labellings.

    Raises:
        ShapeMismatchError: If the labellings differ in length.
        ParameterError: If they are empty.
    """
    true = _encode(y_true)
    pred = _encode(y_pred)
    if true.shape[0] != pred.shape[0]:
        raise ShapeMismatchError(
            f"Label vectors differ in length: {true.shape[0]} != {pred.shape[0]}",
            details={"lengths": (int(true.shape[0]), int(pred.shape[0]))},
        )
    if true.shape[0] == 0:
        raise ParameterError("Cannot evaluate an empty labelling")
    classes, true_idx = np.unique(true, return_inverse=True)
    clusters, pred_idx = np.unique(pred, return_inverse=True)
    counts = np.zeros((clusters.shape[0], classes.shape[0]), dtype=np.int64)
    np.add.at(counts, (pred_idx, true_idx), 1)
    counts.flags.writeable = False
    return ContingencyTable(
        counts=counts, clusters=tuple(clusters.tolist()), classes=tuple(classes.tolist())
    )


def clustering_accuracy(y_true: Sequence, y_pred: Sequence) -> float:
    """
    Accuracy under the best one-to-one mapping of clusters to classes.

    The mapping is found with the Hungarian algorithm on ``max(counts) - counts``.
    Clusters left over when there are more clusters than classes map to
    nothing and count as incorrect.
    """
    table = contingency_table(y_true, y_pred)
    counts = table.counts
    rows, cols = linear_sum_assignment(counts.max() - counts)
    return float(counts[rows, cols].sum()) / table.n


def single_cluster_accuracy(y_true: Sequence) -> float:
    """Accuracy of putting every case in one cluster: the majority class frequency."""
    true = _encode(y_true)
    if true.shape[0] == 0:
        raise ParameterError("Cannot evaluate an empty labelling")
    _, counts = np.unique(true, return_counts=True)
    return float(counts.max()) / true.shape[0]


def _comb2(x: np.ndarray | int) -> np.ndarray | int:
    return x * (x - 1) // 2


def _pair_sums(table: ContingencyTable) -> tuple[int, int, int, int]:
    n = table.n
    if n < 2:
        raise ParameterError(f"Pair-counting indices need at least two cases, got {n}")
    same_both = int(_comb2(table.counts).sum())
    same_pred = int(_comb2(table.cluster_sizes).sum())
    same_true = int(_comb2(table.class_sizes).sum())
    return same_both, same_pred, same_true, int(_comb2(n))


def rand_index(y_true: Sequence, y_pred: Sequence) -> float:
    """Fraction of case pairs on which the two labellings agree."""
    same_both, same_pred, same_true, total = _pair_sums(contingency_table(y_true, y_pred))
    diff_both = total - same_pred - same_true + same_both
    return (same_both + diff_both) / total


def adjusted_rand_index(y_true: Sequence, y_pred: Sequence) -> float:
    """
    Rand index adjusted for chance.

    Returns 0 when the maximum and expected index coincide (both partitions
    trivial).
    """
    same_both, same_pred, same_true, total = _pair_sums(contingency_table(y_true, y_pred))
    expected = same_pred * same_true / total
    maximum = (same_pred + same_true) / 2.0
    if maximum == expected:
        return 0.0
    return (same_both - expected) / (maximum - expected)


def _entropy(sizes: np.ndarray, n: int) -> float:
    sizes = sizes[sizes > 0]
    p = sizes / n
    terms = np.concatenate((p * math.log(n), -p * np.log(sizes)))
    return math.fsum(terms.tolist())


def _mutual_information(table: ContingencyTable) -> float:
    n = table.n
    rows, cols = np.nonzero(table.counts)
    nij = table.counts[rows, cols].astype(np.float64)
    a = table.cluster_sizes[rows].astype(np.float64)
    b = table.class_sizes[cols].astype(np.float64)
    p = nij / n
    # ln(n * nij / (a * b)) split into log terms so they cancel exactly
    terms = np.concatenate((p * np.log(nij), p * math.log(n), -p * np.log(a), -p * np.log(b)))
    return max(0.0, math.fsum(terms.tolist()))


def mutual_information(y_true: Sequence, y_pred: Sequence) -> float:
    """Mutual information in nats."""
    return _mutual_information(contingency_table(y_true, y_pred))


def normalized_mi(y_true: Sequence, y_pred: Sequence) -> float:
    """MI divided by the arithmetic mean of the two entropies; 0 when both are 0."""
    table = contingency_table(y_true, y_pred)
    mi = _mutual_information(table)
    h_pred = _entropy(table.cluster_sizes, table.n)
    h_true = _entropy(table.class_sizes, table.n)
    normaliser = (h_pred + h_true) / 2.0
    if normaliser == 0.0:
        return 0.0
    return min(1.0, mi / normaliser)


def expected_mutual_information(table: ContingencyTable) -> float:
    """
    Expected MI of two random partitions with the table's marginals.

    Exact sum under the hypergeometric model over every feasible cell count.
    """
    n = table.n
    a_sizes = table.cluster_sizes
    b_sizes = table.class_sizes
    log_n = math.log(n)
    lg_n = gammaln(n + 1)
    terms: list[float] = []
    for a in a_sizes:
        for b in b_sizes:
            lo = max(1, int(a + b - n))
            hi = int(min(a, b))
            if lo > hi:
                continue
            nij = np.arange(lo, hi + 1, dtype=np.float64)
            log_p = (
                gammaln(a + 1) + gammaln(b + 1) + gammaln(n - a + 1) + gammaln(n - b + 1)
                - lg_n - gammaln(nij + 1) - gammaln(a - nij + 1) - gammaln(b - nij + 1)
                - gammaln(n - a - b + nij + 1)
            )
            contribution = (nij / n) * (np.log(nij) + log_n - math.log(a) - math.log(b))
            terms.extend((contribution * np.exp(log_p)).tolist())
    return math.fsum(terms)


def adjusted_mi(y_true: Sequence, y_pred: Sequence) -> float:
    """
    MI adjusted for chance: ``(MI - E[MI]) / (mean(H) - E[MI])``.

    When the denominator vanishes, identical partitions score 1 and all others 0.
    """
    table = contingency_table(y_true, y_pred)
    mi = _mutual_information(table)
    h_mean = (_entropy(table.cluster_sizes, table.n) + _entropy(table.class_sizes, table.n)) / 2.0
    emi = expected_mutual_information(table)
    denominator = h_mean - emi
    if abs(denominator) < 1e-15:
        return 1.0 if table.is_one_to_one() else 0.0
    return (mi - emi) / denominator


def evaluate_labels(y_true: Sequence, y_pred: Sequence) -> dict[str, float]:
    """All six supervised metrics, keyed ``clacc, ri, ari, mi, nmi, ami``."""
    n = len(y_true)
    return {
        "clacc": clustering_accuracy(y_true, y_pred),
        "ri": rand_index(y_true, y_pred) if n >= 2 else float("nan"),
        "ari": adjusted_rand_index(y_true, y_pred) if n >= 2 else float("nan"),
        "mi": mutual_information(y_true, y_pred),
        "nmi": normalized_mi(y_true, y_pred),
        "ami": adjusted_mi(y_true, y_pred),
    }


def davies_bouldin(
    D: Dataset | np.ndarray,
    assignments: Sequence[int],
    exemplars: Optional[np.ndarray] = None,
) -> float:
    """
    Davies-Bouldin index in Euclidean space; lower is better separated.

    ``DB = (1/k) * sum_i max_{j != i} (s_i + s_j) / ||c_i - c_j||`` where ``s_i``
    is the mean Euclidean distance of cluster ``i``'s members to its centroid.

    Args:
        D: The clustered series.
        assignments: Cluster id per series.
        exemplars (np.ndarray, optional): Centroids indexed by cluster id.
            Defaults to the arithmetic mean of each cluster, whatever distance
            produced the clustering.

    Raises:
        DegenerateClusteringError: Fewer than two clusters, or two coincident
            centroids.
    """
    X = D.X if isinstance(D, Dataset) else np.asarray(D, dtype=np.float64)
    labels = np.asarray(assignments)
    if labels.shape[0] != X.shape[0]:
        raise ShapeMismatchError(
            f"Got {labels.shape[0]} assignments for {X.shape[0]} series",
            details={"assignments": int(labels.shape[0]), "series": int(X.shape[0])},
        )
    ids = np.unique(labels)
    k = ids.shape[0]
    if k < 2:
        raise DegenerateClusteringError(f"Davies-Bouldin needs at least two clusters, got {k}")
    if exemplars is None:
        centroids = np.vstack([X[labels == c].mean(axis=0) for c in ids])
    else:
        centroids = np.asarray(exemplars, dtype=np.float64)[ids.astype(np.int64)]
    scatter = np.array(
        [np.mean(np.linalg.norm(X[labels == c] - centroids[i], axis=1)) for i, c in enumerate(ids)]
    )
    separation = np.linalg.norm(centroids[:, None, :] - centroids[None, :, :], axis=2)
    off_diagonal = ~np.eye(k, dtype=bool)
    if np.any(separation[off_diagonal] == 0.0):
        raise DegenerateClusteringError("Two clusters share a centroid")
    ratios = (scatter[:, None] + scatter[None, :]) / np.where(off_diagonal, separation, 1.0)
    ratios[~off_diagonal] = -np.inf
    return float(np.mean(ratios.max(axis=1)))
