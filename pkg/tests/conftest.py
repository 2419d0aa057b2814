import logging

import numpy as np
import pytest

from elastic_clust.harness.results import build_report, results_path, write_results
from elastic_clust.harness.ucr import write_ucr_dataset
from elastic_clust.series import Dataset

# Two ten-point series with hand-checked DTW, ERP and LCSS values.
SERIES_A = np.array([0.018, 1.537, -0.141, -0.761, -0.177, -2.192, -0.193, -0.465, -0.944, -0.240])
SERIES_B = np.array([-0.755, 0.446, 1.198, 0.171, 0.564, 0.689, 1.794, 0.066, 0.288, 1.634])


def make_sine_dataset(
    n_per_class: int = 20, length: int = 50, noise: float = 0.1, seed: int = 0, name: str = "Sines"
) -> Dataset:
    """Two classes: a sine wave and its mirror image, with a small phase jitter and noise."""
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 2.0 * np.pi, length)
    rows, labels = [], []
    for label, sign in (("1", 1.0), ("2", -1.0)):
        for _ in range(n_per_class):
            phase = rng.uniform(-0.2, 0.2)
            rows.append(sign * np.sin(t + phase) + noise * rng.standard_normal(length))
            labels.append(label)
    return Dataset(X=np.vstack(rows), labels=labels, name=name)


@pytest.fixture(autouse=True)
def testing_env(monkeypatch):
    monkeypatch.setenv("ELASTIC_CLUST_ENV", "testing")
    yield
    # handlers bound to a CliRunner stream must not outlive the test
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_elastic_clust", False):
            root.removeHandler(handler)


@pytest.fixture
def series_pair():
    return SERIES_A.copy(), SERIES_B.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


@pytest.fixture
def sine_dataset():
    return make_sine_dataset()


@pytest.fixture
def ucr_problem(tmp_path):
    """Train and test ``.ts`` files of the two-class sine problem."""
    train = make_sine_dataset(n_per_class=10, length=40, seed=1)
    test = make_sine_dataset(n_per_class=6, length=40, seed=2)
    train_path = tmp_path / "data" / "Sines" / "Sines_TRAIN.ts"
    test_path = tmp_path / "data" / "Sines" / "Sines_TEST.ts"
    write_ucr_dataset(train, str(train_path))
    write_ucr_dataset(test, str(test_path))
    return str(train_path), str(test_path)


def write_results_run(
    root, algorithm, dataset, assigned, resample=0, split="test", labels=("a", "a", "b", "b")
):
    """Write a results file for a four-case problem and return its path."""
    report = build_report(
        dataset=dataset,
        clusterer=algorithm,
        split=split,
        resample=resample,
        seed=1 + resample,
        parameters="metric=ed",
        true_labels=labels,
        assigned=assigned,
        db=0.5,
    )
    return write_results(report, results_path(str(root), algorithm, dataset, split, resample))
