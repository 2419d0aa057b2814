#!/usr/bin/env python
"""
k-means against k-medoids at desk scale.

Runs both clusterers with msm, twe, erp and dtw on every UCR problem under a
directory whose train split is small enough, then prints the mean test
clustering accuracy per (measure, clusterer) and whether k-medoids came out
ahead. Results files go under ``--out`` so reruns can be collated and ranked
with ``run.py collate`` / ``run.py rank``.

Usage:
    python scripts/desk_scale_reproduction.py --root /data/UCRArchive_2018 --out results/desk
"""

# SCRIPT META INFO
__version__ = "1.0.0"

import logging
import os
import sys
from collections import defaultdict

import click
import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from elastic_clust import create_toolkit  # noqa: E402
from elastic_clust.distances import DistanceSpec  # noqa: E402
from elastic_clust.errors import ElasticClustError  # noqa: E402
from elastic_clust.harness.experiments import ExperimentConfig, run_experiment  # noqa: E402
from elastic_clust.harness.ucr import find_problem_file, load_ucr_dataset  # noqa: E402

logger = logging.getLogger("desk_scale_reproduction")

MEASURES = ("msm", "twe", "erp", "dtw")
CLUSTERERS = ("kmeans", "kmedoids")


def small_problems(root: str, max_train: int, max_length: int) -> list[tuple[str, str, str]]:
    """(name, train path, test path) for problems within the size limits, sorted by name."""
    problems = []
    for name in sorted(os.listdir(root)):
        if not os.path.isdir(os.path.join(root, name)):
            continue
        try:
            train_path = find_problem_file(root, name, "TRAIN")
            test_path = find_problem_file(root, name, "TEST")
            train = load_ucr_dataset(train_path, name=name)
        except ElasticClustError as e:
            logger.warning(f"Skipping {name}: {e}")
            continue
        if train.n_cases <= max_train and train.series_length <= max_length:
            problems.append((name, train_path, test_path))
    return problems


@click.command()
@click.option(
    "--root",
    required=True,
    type=click.Path(exists=True, file_okay=False),
    help="Extracted UCR problems.",
)
@click.option(
    "--out",
    "out_dir",
    default="results/desk",
    show_default=True,
    type=click.Path(file_okay=False),
)
@click.option("--max-train", default=100, show_default=True, type=int)
@click.option("--max-length", default=300, show_default=True, type=int)
@click.option("--restarts", default=10, show_default=True, type=int)
@click.option("--threads", default=1, show_default=True, type=int)
@click.option("--overwrite", is_flag=True)
def main(root, out_dir, max_train, max_length, restarts, threads, overwrite):
    toolkit = create_toolkit()
    problems = small_problems(root, max_train, max_length)
    if not problems:
        raise click.ClickException(
            f"No problems under {root} with train n <= {max_train} and m <= {max_length}"
        )
    logger.info(f"Running {len(problems)} problems: {', '.join(name for name, _, _ in problems)}")

    scores: dict[tuple[str, str], list[float]] = defaultdict(list)
    for name, train_path, test_path in problems:
        for metric in MEASURES:
            for clusterer in CLUSTERERS:
                cfg = ExperimentConfig(
                    train_path=train_path,
                    test_path=test_path,
                    distance=DistanceSpec(metric),
                    clusterer=clusterer,
                    restarts=restarts,
                    threads=threads,
                    base_seed=toolkit["BASE_SEED"],
                    out_dir=out_dir,
                    overwrite=overwrite,
                )
                try:
                    result = run_experiment(cfg)
                except ElasticClustError as e:
                    logger.error(f"{name} {clusterer}-{metric}: {e}")
                    continue
                scores[(metric, clusterer)].append(result.test.clacc)

    medoid_wins = 0
    click.echo("measure\tkmeans\tkmedoids")
    for metric in MEASURES:
        means = {clusterer: float(np.mean(scores[(metric, clusterer)])) for clusterer in CLUSTERERS}
        if means["kmedoids"] > means["kmeans"]:
            medoid_wins += 1
        click.echo(f"{metric}\t{means['kmeans']:.4f}\t{means['kmedoids']:.4f}")
    click.echo(f"k-medoids ahead on {medoid_wins} of {len(MEASURES)} measures")


if __name__ == "__main__":
    main()
