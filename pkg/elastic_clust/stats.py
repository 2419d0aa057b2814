"""
Comparing clusterers over many datasets.

Scores are ranked per dataset (1 = best, higher score better, mid-ranks for
ties), every pair of algorithms is compared with a two-sided Wilcoxon
signed-rank test, and the p-values are corrected with Holm's step-down
procedure. Rank-adjacent algorithms with no significant difference between
any two of them form a clique.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy.stats import norm, rankdata

from elastic_clust.errors import ParameterError, UndefinedTestError

logger = logging.getLogger(__name__)

EXACT_WILCOXON_MAX_N = 25

# metrics where a lower value is better; their tables are negated before ranking
LOWER_IS_BETTER = ("db",)


@dataclass(frozen=True, eq=False)
class ResultsTable:
    """
    One metric's scores: datasets as rows, algorithms as columns.

    Attributes:
        scores (pd.DataFrame): Complete grid, no missing cells.
        metric (str): Name of the metric the scores hold.
        baseline (pd.Series, optional): Single-cluster accuracy per dataset.
    """

    scores: pd.DataFrame
    metric: str = "clacc"
    baseline: Optional[pd.Series] = field(default=None)

    @classmethod
    def from_frame(
        cls, frame: pd.DataFrame, metric: str = "clacc", baseline: Optional[pd.Series] = None
    ) -> "ResultsTable":
        """Drop datasets with a missing cell (with a warning) and sort both axes."""
        frame = frame.astype(np.float64)
        incomplete = frame.index[frame.isna().any(axis=1)]
        for dataset in incomplete:
            missing = sorted(frame.columns[frame.loc[dataset].isna()])
            logger.warning(
                f"Dropping dataset {dataset} from the {metric} table: "
                f"no result for {', '.join(missing)}"
            )
        frame = frame.drop(index=incomplete).sort_index(axis=0).sort_index(axis=1)
        if baseline is not None:
            baseline = baseline.reindex(frame.index)
        return cls(scores=frame, metric=metric, baseline=baseline)

    @property
    def datasets(self) -> list[str]:
        return list(self.scores.index)

    @property
    def algorithms(self) -> list[str]:
        return list(self.scores.columns)

    def oriented(self) -> pd.DataFrame:
        """Scores with higher always better."""
        return -self.scores if self.metric in LOWER_IS_BETTER else self.scores

    def subset(self, datasets: Sequence[str]) -> "ResultsTable":
        baseline = None if self.baseline is None else self.baseline.loc[list(datasets)]
        return ResultsTable(
            scores=self.scores.loc[list(datasets)], metric=self.metric, baseline=baseline
        )


def _check_table(table: ResultsTable) -> None:
    if table.scores.shape[0] == 0 or table.scores.shape[1] == 0:
        raise ParameterError(f"The {table.metric} table is empty")


def rank_matrix(table: ResultsTable) -> pd.DataFrame:
    """Per-dataset ranks, 1 = best, ties sharing the mean of their ranks."""
    _check_table(table)
    ranks = rankdata(-table.oriented().to_numpy(), method="average", axis=1)
    return pd.DataFrame(ranks, index=table.scores.index, columns=table.scores.columns)


def average_ranks(table: ResultsTable) -> pd.Series:
    """Mean rank per algorithm, in column order."""
    return rank_matrix(table).mean(axis=0)


def wilcoxon_signed_rank(
    x: Sequence[float], y: Sequence[float], exact_max_n: int = EXACT_WILCOXON_MAX_N
) -> float:
    """
    Two-sided Wilcoxon signed-rank test on paired scores.

    Zero differences are dropped and tied absolute differences get mid-ranks.
    For up to ``exact_max_n`` remaining pairs the p-value comes from the exact
    null distribution of the positive rank sum; above that a normal
    approximation with tie and continuity corrections is used.

    Returns:
        float: ``min(1, 2 * smaller tail probability)``.

    Raises:
        UndefinedTestError: If every difference is zero.
    """
    d = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
    d = d[d != 0.0]
    n = d.shape[0]
    if n == 0:
        raise UndefinedTestError("Wilcoxon test undefined: all paired differences are zero")
    ranks = rankdata(np.abs(d), method="average")
    if n <= exact_max_n:
        return _exact_p(ranks, d > 0)
    return _normal_p(ranks, d > 0)


def _exact_p(ranks: np.ndarray, positive: np.ndarray) -> float:
    # mid-ranks are multiples of 0.5, so doubled ranks are integers
    doubled = np.rint(2.0 * ranks).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    w = int(doubled[positive].sum())
    n_outcomes = 2.0 ** ranks.shape[0]
    lower = counts[: w + 1].sum() / n_outcomes
    upper = counts[w:].sum() / n_outcomes
    return float(min(1.0, 2.0 * min(lower, upper)))


def _normal_p(ranks: np.ndarray, positive: np.ndarray) -> float:
    n = ranks.shape[0]
    w = float(ranks[positive].sum())
    mean = n * (n + 1) / 4.0
    _, tie_sizes = np.unique(ranks, return_counts=True)
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_sizes**3 - tie_sizes)) / 48.0
    z = max(0.0, abs(w - mean) - 0.5) / math.sqrt(variance)
    return float(min(1.0, 2.0 * norm.sf(z)))


def holm_correction(p_values: Sequence[float], alpha: float = 0.05) -> np.ndarray:
    """
    Holm step-down rejections, in input order.

    The ``i``-th smallest p-value (from 0) is rejected while it is below
    ``alpha / (m - i)``; testing stops at the first retained hypothesis.
    NaN p-values (undefined tests) are treated as 1.
    """
    p = np.asarray(p_values, dtype=np.float64)
    p = np.where(np.isnan(p), 1.0, p)
    m = p.shape[0]
    reject = np.zeros(m, dtype=bool)
    for i, idx in enumerate(np.argsort(p, kind="stable")):
        if p[idx] < alpha / (m - i):
            reject[idx] = True
        else:
            break
    return reject


@dataclass(frozen=True, eq=False)
class CliqueResult:
    """
    Algorithms ordered by mean rank with their cliques.

    Attributes:
        order (list): Algorithms, best mean rank first (ties by name).
        mean_ranks (dict): Mean rank per algorithm.
        cliques (list): Maximal runs of rank-adjacent algorithms with no
            significant pair, each of at least two algorithms.
        pairwise (pd.DataFrame): One row per pair: ``a, b, p_value, significant``.
        metric (str): Metric of the underlying table.
        n_datasets (int): Datasets ranked.
        alpha (float): Family-wise significance level.
    """

    order: list[str]
    mean_ranks: dict[str, float]
    cliques: list[tuple[str, ...]]
    pairwise: pd.DataFrame
    metric: str
    n_datasets: int
    alpha: float


def pairwise_tests(
    table: ResultsTable, alpha: float = 0.05, order: Optional[Sequence[str]] = None
) -> pd.DataFrame:
    """Wilcoxon p-value and Holm decision for every pair of algorithms."""
    _check_table(table)
    scores = table.oriented()
    names = list(order) if order is not None else table.algorithms
    records = []
    for a, b in itertools.combinations(names, 2):
        try:
            p = wilcoxon_signed_rank(scores[a].to_numpy(), scores[b].to_numpy())
        except UndefinedTestError:
            logger.debug(f"{a} vs {b}: identical scores, test undefined")
            p = math.nan
        records.append({"a": a, "b": b, "p_value": p})
    frame = pd.DataFrame.from_records(records, columns=["a", "b", "p_value"])
    frame["significant"] = holm_correction(frame["p_value"].to_numpy(), alpha) if len(frame) else []
    return frame


def holm_cliques(table: ResultsTable, alpha: float = 0.05) -> CliqueResult:
    """
    Rank the algorithms and group those not significantly different.

    The algorithm order (mean rank, then name) does not depend on the input
    column order.
    """
    ranks = average_ranks(table)
    order = sorted(ranks.index, key=lambda name: (ranks[name], name))
    pairwise = pairwise_tests(table, alpha, order=order)
    significant = {
        frozenset((row.a, row.b)) for row in pairwise.itertuples(index=False) if row.significant
    }

    cliques: list[tuple[str, ...]] = []
    furthest = 0
    for i in range(len(order)):
        end = i
        while end + 1 < len(order) and not any(
            frozenset((order[j], order[end + 1])) in significant for j in range(i, end + 1)
        ):
            end += 1
        if end > i and end > furthest:
            cliques.append(tuple(order[i : end + 1]))
            furthest = end
    return CliqueResult(
        order=order,
        mean_ranks={name: float(ranks[name]) for name in order},
        cliques=cliques,
        pairwise=pairwise,
        metric=table.metric,
        n_datasets=table.scores.shape[0],
        alpha=alpha,
    )


def pairwise_wins(table: ResultsTable, algorithm_a: str, algorithm_b: str) -> tuple[int, int, int]:
    """Datasets where ``algorithm_a`` beats, loses to and ties ``algorithm_b``."""
    scores = table.oriented()
    for name in (algorithm_a, algorithm_b):
        if name not in scores.columns:
            raise ParameterError(f"No algorithm '{name}' in the {table.metric} table")
    a = scores[algorithm_a].to_numpy()
    b = scores[algorithm_b].to_numpy()
    return int(np.sum(a > b)), int(np.sum(a < b)), int(np.sum(a == b))


def filter_informative_datasets(
    table: ResultsTable, baseline: Optional[pd.Series] = None, min_gain: float = 0.05
) -> ResultsTable:
    """
    Keep datasets where the best algorithm beats the baseline by ``min_gain``.

    The baseline defaults to the table's single-cluster accuracy.
    """
    baseline = table.baseline if baseline is None else baseline
    if baseline is None:
        raise ParameterError("No baseline scores to filter datasets against")
    best = table.scores.max(axis=1)
    keep = best - baseline.reindex(table.scores.index) >= min_gain
    dropped = list(table.scores.index[~keep])
    if dropped:
        names = ", ".join(map(str, dropped))
        logger.info(f"Dropping {len(dropped)} uninformative datasets: {names}")
    return table.subset(list(table.scores.index[keep]))


def format_cd_text(result: CliqueResult) -> str:
    lines = [f"{result.mean_ranks[name]:.4f}  {name}" for name in result.order]
    lines += [f"clique: {', '.join(clique)}" for clique in result.cliques]
    return "\n".join(lines) + "\n"


def cd_summary(result: CliqueResult) -> dict:
    return {
        "metric": result.metric,
        "n_datasets": result.n_datasets,
        "alpha": result.alpha,
        "algorithms": [
            {"name": name, "mean_rank": round(result.mean_ranks[name], 4)} for name in result.order
        ],
        "cliques": [list(clique) for clique in result.cliques],
        "pairwise": [
            {
                "a": row.a,
                "b": row.b,
                "p_value": None if math.isnan(row.p_value) else float(f"{row.p_value:.6g}"),
                "significant": bool(row.significant),
            }
            for row in result.pairwise.itertuples(index=False)
        ],
    }


def write_cd_svg(result: CliqueResult, svg_path: str) -> None:
    """Draw a critical-difference style diagram; the bytes are stable across runs."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    k = len(result.order)
    with plt.rc_context({"svg.hashsalt": "elastic_clust", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(8, 1.2 + 0.3 * k))
        ax.set_xlim(max(k, 2) + 0.5, 0.5)
        ax.set_ylim(-(k + len(result.cliques) + 1), 1)
        ax.axhline(0, color="black", linewidth=1)
        ax.set_xticks(range(1, max(k, 2) + 1))
        ax.xaxis.tick_top()
        ax.get_yaxis().set_visible(False)
        for spine in ("left", "right", "bottom"):
            ax.spines[spine].set_visible(False)
        for row, name in enumerate(result.order, start=1):
            rank = result.mean_ranks[name]
            ax.plot([rank, rank], [0, -row], color="black", linewidth=0.8)
            ax.text(rank, -row, f" {name} ({rank:.4f})", va="center", ha="right", fontsize=8)
        for row, clique in enumerate(result.cliques, start=k + 1):
            lo = result.mean_ranks[clique[0]]
            hi = result.mean_ranks[clique[-1]]
            ax.plot([lo, hi], [-row * 0.5, -row * 0.5], color="black", linewidth=3)
        directory = os.path.dirname(svg_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        fig.savefig(svg_path, format="svg", metadata={"Date": None})
        plt.close(fig)


def emit_cd_output(
    result: CliqueResult,
    summary_path: Optional[str] = None,
    svg_path: Optional[str] = None,
) -> tuple[str, dict]:
    """
    Text table and structured summary of a clique analysis.

    The text has one line per algorithm (mean rank to four decimals, then the
    name) followed by one ``clique:`` line per clique. The summary is also
    written as JSON to ``summary_path`` and the diagram to ``svg_path`` when given.
    """
    text = format_cd_text(result)
    summary = cd_summary(result)
    if summary_path:
        directory = os.path.dirname(summary_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(summary, indent=2) + "\n")
    if svg_path:
        write_cd_svg(result, svg_path)
    return text, summary
