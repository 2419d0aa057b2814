"""
UCR ingestion, experiment runs, results files, collation and benchmarks.
"""

from elastic_clust.harness.bench import BenchResult, bench_distance
from elastic_clust.harness.collate import collate_results, load_reports
from elastic_clust.harness.experiments import (
    ExperimentConfig,
    ExperimentResult,
    experiment_seed,
    run_experiment,
)
from elastic_clust.harness.results import (
    METRIC_FIELDS,
    EvalReport,
    build_report,
    find_results_files,
    parse_results,
    read_results,
    results_path,
    write_results,
)
from elastic_clust.harness.ucr import load_ucr_dataset, load_ucr_problem, write_ucr_dataset

__all__ = [
    "METRIC_FIELDS",
    "BenchResult",
    "EvalReport",
    "ExperimentConfig",
    "ExperimentResult",
    "bench_distance",
    "build_report",
    "collate_results",
    "experiment_seed",
    "find_results_files",
    "load_reports",
    "load_ucr_dataset",
    "load_ucr_problem",
    "parse_results",
    "read_results",
    "results_path",
    "run_experiment",
    "write_results",
]
