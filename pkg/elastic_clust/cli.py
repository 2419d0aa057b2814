"""
Command-line interface.

Subcommands::

    dist        distance (and optionally the alignment path) between two series
    pairwise    distance matrix of a dataset
    cluster     fit one clusterer on one dataset and report
    experiment  train/test run writing results files
    collate     results files -> one table per metric
    rank        mean ranks and cliques of algorithms over datasets
    compare     wins, losses and ties between two algorithms
    bench       timing of repeated distance calls

A YAML file passed with ``--config`` fills in option defaults: top-level keys
apply to every subcommand, a mapping under a subcommand's name applies to that
subcommand only. Explicit flags win over the file, the file wins over the
environment configuration.

Exit codes: 0 on success, 1 on a toolkit error (message on stderr), 2 on a
usage error.
"""

from __future__ import annotations

import logging
import os
import re
from typing import Any, Optional, Sequence

import click
import numpy as np
import pandas as pd
import yaml

from elastic_clust import create_toolkit
from elastic_clust.clustering import (
    AVERAGING_METHODS,
    CLUSTERERS,
    INIT_METHODS,
    ClusteringConfig,
    fit_clusterer,
)
from elastic_clust.distances import (
    DISTANCE_NAMES,
    DistanceSpec,
    alignment_path,
    pairwise_distance,
    resolve_distance,
)
from elastic_clust.errors import (
    DatasetParseError,
    DegenerateClusteringError,
    ElasticClustError,
    ParameterError,
)
from elastic_clust.harness.bench import bench_distance
from elastic_clust.harness.collate import TABLE_METRICS, collate_results
from elastic_clust.harness.experiments import ExperimentConfig, run_experiment
from elastic_clust.harness.results import SPLITS, format_real
from elastic_clust.harness.ucr import load_ucr_dataset
from elastic_clust.metrics import davies_bouldin, evaluate_labels
from elastic_clust.stats import (
    ResultsTable,
    emit_cd_output,
    filter_informative_datasets,
    holm_cliques,
    pairwise_wins,
)
from version import __version__

logger = logging.getLogger(__name__)

# YAML spellings of option names
CONFIG_KEY_ALIASES = {"lambda": "lmbda", "cost": "c", "max-iters": "max_iters"}


class ElasticClustGroup(click.Group):
    """Turns toolkit errors into click errors (message on stderr, exit code 1)."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except ElasticClustError as e:
            logger.debug(f"{type(e).__name__}: {e.details}")
            raise click.ClickException(str(e)) from e
        except OSError as e:
            raise click.ClickException(str(e)) from e


def load_config_file(path: str, commands: Sequence[str]) -> dict[str, dict[str, Any]]:
    """
    Read a YAML run configuration into a click ``default_map``.

    Raises:
        ParameterError: If the file does not hold a mapping.
    """
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ParameterError(f"{path}: expected a mapping of option names to values")

    def canonical(values: dict) -> dict[str, Any]:
        out = {}
        for key, value in values.items():
            key = CONFIG_KEY_ALIASES.get(str(key), str(key)).replace("-", "_")
            out[key] = value
        return out

    shared = canonical({key: value for key, value in data.items() if not isinstance(value, dict)})
    default_map = {}
    for command in commands:
        section = data.get(command)
        own = canonical(section) if isinstance(section, dict) else {}
        default_map[command] = {**shared, **own}
    return default_map


def distance_options(f):
    """``--metric`` and the measure parameters; unset parameters keep their defaults."""
    options = [
        click.option(
            "--metric",
            type=click.Choice(DISTANCE_NAMES, case_sensitive=False),
            default="dtw",
            show_default=True,
            help="Distance measure.",
        ),
        click.option(
            "--window", type=float, help="Band width as a fraction of the length (dtw, ddtw)."
        ),
        click.option("--g", "g", type=float, help="Weight steepness (wdtw, wddtw)."),
        click.option("--epsilon", type=float, help="Match threshold (lcss, edr)."),
        click.option("--gap", type=float, help="Gap reference value (erp)."),
        click.option("--cost", "c", type=float, help="Split/merge cost (msm)."),
        click.option("--nu", type=float, help="Stiffness (twe)."),
        click.option("--lambda", "lmbda", type=float, help="Edit penalty (twe)."),
        click.option(
            "--edr-normalize",
            is_flag=True,
            default=False,
            help="Divide the EDR count by the length.",
        ),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def clustering_options(f):
    options = [
        click.option(
            "--clusterer", type=click.Choice(CLUSTERERS), default="kmeans", show_default=True
        ),
        click.option(
            "--averaging", type=click.Choice(AVERAGING_METHODS), default="mean", show_default=True
        ),
        click.option(
            "--k",
            "k",
            type=click.IntRange(min=1),
            help="Clusters (default: number of train classes).",
        ),
        click.option("--restarts", type=click.IntRange(min=1), default=10, show_default=True),
        click.option("--max-iters", type=click.IntRange(min=1), default=300, show_default=True),
        click.option("--init", type=click.Choice(INIT_METHODS), default="forgy", show_default=True),
        click.option("--seed", type=int, help="Base seed (default from the configuration)."),
        click.option("--threads", type=click.IntRange(min=1), help="Worker threads."),
        click.option(
            "--normalize/--no-normalize",
            default=True,
            show_default=True,
            help="z-normalise series.",
        ),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def build_spec(metric: str, **params: Any) -> DistanceSpec:
    given = {key: value for key, value in params.items() if value is not None}
    return DistanceSpec.create(metric, **given)


def read_series(token: str) -> np.ndarray:
    """A series from a file of numbers, or from a comma-separated literal."""
    if os.path.isfile(token):
        with open(token, encoding="utf-8") as fh:
            text = fh.read()
        source = token
    else:
        text, source = token, "<argument>"
    values = [v for v in re.split(r"[,\s]+", text.strip()) if v]
    try:
        return np.asarray([float(v) for v in values], dtype=np.float64)
    except ValueError:
        raise DatasetParseError(
            f"{source}: expected numbers separated by commas or whitespace"
        ) from None


def _setting(ctx: click.Context, value: Any, key: str) -> Any:
    return value if value is not None else ctx.obj.get(key)


@click.group(cls=ElasticClustGroup, context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    help="YAML run configuration.",
)
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Overrides the configured log level.",
)
@click.version_option(__version__, prog_name="elastic-clust")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], log_level: Optional[str]) -> None:
    """Elastic time-series distances and partitional clustering."""
    ctx.obj = create_toolkit(log_level=log_level)
    if config_path:
        try:
            ctx.default_map = load_config_file(config_path, list(cli.commands))
        except yaml.YAMLError as e:
            raise click.ClickException(f"{config_path}: not valid YAML ({e})") from e
        logger.info(f"Read option defaults from {config_path}")


@cli.command()
@click.argument("series_a")
@click.argument("series_b")
@distance_options
@click.option(
    "--path",
    "show_path",
    is_flag=True,
    help="Also print the alignment path, one 'i,j' pair per line.",
)
def dist(series_a: str, series_b: str, metric: str, show_path: bool, **params: Any) -> None:
    """Distance between two series (files of numbers or comma-separated values)."""
    spec = build_spec(metric, **params)
    a, b = read_series(series_a), read_series(series_b)
    if show_path and spec.name != "ed":
        path, value = alignment_path(a, b, spec)
        click.echo(repr(value))
        for i, j in path:
            click.echo(f"{i},{j}")
    else:
        click.echo(repr(resolve_distance(spec)(a, b)))


@cli.command()
@click.option("--train", "data_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--out", "out_path", required=True, type=click.Path(dir_okay=False), help="CSV matrix to write."
)
@click.option("--normalize/--no-normalize", default=True, show_default=True)
@click.option("--threads", type=click.IntRange(min=1))
@distance_options
@click.pass_context
def pairwise(
    ctx: click.Context,
    data_path: str,
    out_path: str,
    normalize: bool,
    threads: Optional[int],
    metric: str,
    **params: Any,
) -> None:
    """Distance matrix between every pair of series in a dataset."""
    D = load_ucr_dataset(data_path)
    if normalize:
        D = D.z_normalized()
    spec = build_spec(metric, **params)
    matrix = pairwise_distance(D, spec=spec, threads=_setting(ctx, threads, "THREADS"))
    directory = os.path.dirname(out_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    pd.DataFrame(matrix).to_csv(
        out_path, header=False, index=False, float_format="%.17g", lineterminator="\n"
    )
    logger.info(f"Wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to {out_path}")
    click.echo(out_path)


@cli.command()
@click.option("--train", "data_path", required=True, type=click.Path(exists=True, dir_okay=False))
@clustering_options
@distance_options
@click.pass_context
def cluster(
    ctx: click.Context,
    data_path: str,
    clusterer: str,
    averaging: str,
    k: Optional[int],
    restarts: int,
    max_iters: int,
    init: str,
    seed: Optional[int],
    threads: Optional[int],
    normalize: bool,
    metric: str,
    **params: Any,
) -> None:
    """Fit a clusterer on one dataset and print the fit and its scores."""
    D = load_ucr_dataset(data_path)
    if normalize:
        D = D.z_normalized()
    if k is None:
        if D.labels is None:
            raise ParameterError("--k is required for unlabelled data")
        k = len(D.classes)
    config = ClusteringConfig(
        k=k,
        clusterer=clusterer,
        averaging=averaging,
        distance=build_spec(metric, **params),
        max_iters=max_iters,
        restarts=restarts,
        seed=_setting(ctx, seed, "BASE_SEED"),
        init=init,
        threads=_setting(ctx, threads, "THREADS"),
    )
    model = fit_clusterer(D.without_labels(), config)
    rows = [
        ("dataset", D.name),
        ("algorithm", config.algorithm_name),
        ("k", k),
        ("inertia", format_real(model.inertia)),
        ("iterations", model.iterations_run),
        ("converged", str(model.converged).lower()),
    ]
    if D.labels is not None:
        scores = evaluate_labels(D.labels, model.assignments)
        rows += [(name, format_real(value)) for name, value in scores.items()]
    try:
        rows.append(("db", format_real(davies_bouldin(D, model.assignments))))
    except DegenerateClusteringError:
        rows.append(("db", "nan"))
    for name, value in rows:
        click.echo(f"{name}\t{value}")
    click.echo("assignments\t" + ",".join(str(int(c)) for c in model.assignments))


@cli.command()
@click.option("--train", "train_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--test", "test_path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False),
    help="Results root (default from the configuration).",
)
@click.option("--resample", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--overwrite", is_flag=True, help="Replace existing results files.")
@click.option("--tune-window", is_flag=True, help="Pick the DTW window by Davies-Bouldin index.")
@click.option(
    "--db-highest", is_flag=True, help="When tuning, keep the window with the highest index."
)
@click.option(
    "--timing/--no-timing", default=None, help="Write measured runtimes to the results files."
)
@clustering_options
@distance_options
@click.pass_context
def experiment(
    ctx: click.Context,
    train_path: str,
    test_path: Optional[str],
    out_dir: Optional[str],
    resample: int,
    overwrite: bool,
    tune_window: bool,
    db_highest: bool,
    timing: Optional[bool],
    clusterer: str,
    averaging: str,
    k: Optional[int],
    restarts: int,
    max_iters: int,
    init: str,
    seed: Optional[int],
    threads: Optional[int],
    normalize: bool,
    metric: str,
    **params: Any,
) -> None:
    """Fit on the train split, evaluate train and test, write results files."""
    cfg = ExperimentConfig(
        train_path=train_path,
        test_path=test_path,
        distance=build_spec(metric, **params),
        clusterer=clusterer,
        averaging=averaging,
        k=k,
        max_iters=max_iters,
        restarts=restarts,
        init=init,
        threads=_setting(ctx, threads, "THREADS"),
        normalize=normalize,
        resample=resample,
        base_seed=_setting(ctx, seed, "BASE_SEED"),
        out_dir=_setting(ctx, out_dir, "RESULTS_DIR"),
        overwrite=overwrite,
        tune_window=tune_window,
        db_select="max" if db_highest else "min",
        record_timing=bool(_setting(ctx, timing, "RECORD_TIMING")),
    )
    result = run_experiment(cfg)
    for report in (result.train, result.test):
        if report is not None:
            clacc, ari = format_real(report.clacc), format_real(report.ari)
            click.echo(f"{report.split}\tclacc={clacc}\tari={ari}")
    for path in result.paths:
        click.echo(path)


def load_table(paths: Sequence[str], split: str, metric: str) -> ResultsTable:
    """
    The ``metric`` table collated from results files, or read from a
    datasets-by-algorithms CSV (as written by ``collate --out``) given as the
    only path.
    """
    single = paths[0] if len(paths) == 1 else None
    if single and os.path.isfile(single) and "Resample" not in os.path.basename(single):
        frame = pd.read_csv(paths[0], index_col=0)
        frame.index = frame.index.astype(str)
        return ResultsTable.from_frame(frame, metric=metric)
    return collate_results(paths, split=split, metrics=[metric])[metric]


@cli.command()
@click.argument("roots", nargs=-1, required=True, type=click.Path(exists=True))
@click.option(
    "--split",
    "splits",
    type=click.Choice(SPLITS),
    multiple=True,
    help="Split(s) to collate [default: test].",
)
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False),
    help="Directory for <split>_<metric>.csv tables.",
)
def collate(roots: tuple[str, ...], splits: tuple[str, ...], out_dir: Optional[str]) -> None:
    """Average results files over resamples into one table per metric."""
    for split in splits or ("test",):
        tables = collate_results(roots, split=split)
        for metric, table in tables.items():
            click.echo(
                f"{split}\t{metric}\t{len(table.datasets)} datasets\t"
                f"{len(table.algorithms)} algorithms"
            )
            if out_dir:
                os.makedirs(out_dir, exist_ok=True)
                path = os.path.join(out_dir, f"{split}_{metric}.csv")
                table.scores.to_csv(path, float_format="%.6g", lineterminator="\n")
                logger.info(f"Wrote {path}")


@cli.command()
@click.argument("roots", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--metric", type=click.Choice(TABLE_METRICS), default="clacc", show_default=True)
@click.option(
    "--split",
    "splits",
    type=click.Choice(SPLITS),
    multiple=True,
    help="Split(s) to rank [default: test].",
)
@click.option(
    "--alpha",
    type=click.FloatRange(0.0, 1.0, min_open=True),
    help="Family-wise significance level.",
)
@click.option(
    "--baseline-gain",
    type=float,
    help="Keep datasets where the best score beats one cluster by this much.",
)
@click.option(
    "--summary", "summary_path", type=click.Path(dir_okay=False), help="JSON summary to write."
)
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), help="Diagram to write.")
@click.pass_context
def rank(
    ctx: click.Context,
    roots: tuple[str, ...],
    metric: str,
    splits: tuple[str, ...],
    alpha: Optional[float],
    baseline_gain: Optional[float],
    summary_path: Optional[str],
    svg_path: Optional[str],
) -> None:
    """Mean ranks of the algorithms and their cliques of equivalent performance."""
    splits = splits or ("test",)
    for split in splits:
        table = load_table(roots, split, metric)
        if baseline_gain is not None:
            table = filter_informative_datasets(table, min_gain=baseline_gain)
        result = holm_cliques(table, alpha=_setting(ctx, alpha, "ALPHA"))
        suffix = f".{split}" if len(splits) > 1 else ""
        text, _ = emit_cd_output(
            result,
            summary_path=_with_suffix(summary_path, suffix),
            svg_path=_with_suffix(svg_path, suffix),
        )
        if len(splits) > 1:
            click.echo(f"# {split} {metric} ({result.n_datasets} datasets)")
        click.echo(text, nl=False)


def _with_suffix(path: Optional[str], suffix: str) -> Optional[str]:
    if not path or not suffix:
        return path
    stem, ext = os.path.splitext(path)
    return f"{stem}{suffix}{ext}"


@cli.command()
@click.argument("algorithm_a")
@click.argument("algorithm_b")
@click.argument("roots", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--metric", type=click.Choice(TABLE_METRICS), default="clacc", show_default=True)
@click.option("--split", type=click.Choice(SPLITS), default="test", show_default=True)
def compare(
    algorithm_a: str, algorithm_b: str, roots: tuple[str, ...], metric: str, split: str
) -> None:
    """Datasets on which one algorithm beats, loses to and ties another."""
    table = load_table(roots, split, metric)
    wins, losses, ties = pairwise_wins(table, algorithm_a, algorithm_b)
    click.echo(
        f"{algorithm_a} vs {algorithm_b} ({metric}, {split}): "
        f"{wins} wins, {losses} losses, {ties} ties"
    )


@cli.command()
@click.option(
    "--length",
    "lengths",
    type=click.IntRange(min=1),
    multiple=True,
    help="Series length [default: 1000].",
)
@click.option("--reps", type=click.IntRange(min=1), default=200, show_default=True)
@click.option(
    "--seed", type=int, help="Seed of the random series (default from the configuration)."
)
@distance_options
@click.pass_context
def bench(
    ctx: click.Context,
    lengths: tuple[int, ...],
    reps: int,
    seed: Optional[int],
    metric: str,
    **params: Any,
) -> None:
    """Seconds taken by repeated distance calls on random series."""
    results = bench_distance(
        build_spec(metric, **params),
        lengths=lengths or (1000,),
        reps=reps,
        seed=_setting(ctx, seed, "BASE_SEED"),
    )
    for result in results:
        click.echo(
            f"{result.metric}\tlength={result.length}\treps={result.reps}"
            f"\tseconds={result.seconds:.3f}"
        )


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return its exit code instead of exiting."""
    try:
        args = list(argv) if argv is not None else None
        rv = cli.main(args=args, prog_name="elastic-clust", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except (OSError, ValueError) as e:
        click.echo(f"Error: {e}", err=True)
        return 1
    return rv if isinstance(rv, int) else 0
