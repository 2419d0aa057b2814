"""
Reading and writing UCR-format datasets.

Two layouts are accepted:

* the ``.ts`` format: ``@``-prefixed header lines (``@problemName``,
  ``@univariate``, ``@classLabel``, ...) followed by ``@data`` and one case per
  line as ``v1,v2,...,vm:label``;
* plain delimited files (tab, comma or whitespace) with the class label in the
  first column, as in the ``.tsv`` archive release.

Datasets the protocol excludes (unequal lengths, missing values) are rejected
with `UnsupportedDatasetError`, not skipped.
"""

from __future__ import annotations

import logging
import os
import re
from collections import Counter
from typing import Optional

import numpy as np

from elastic_clust.errors import (
    DatasetError,
    DatasetParseError,
    UnequalLengthError,
    UnsupportedDatasetError,
)
from elastic_clust.series import Dataset

logger = logging.getLogger(__name__)

MISSING_TOKENS = {"?", "nan", "na", ""}
SPLIT_SUFFIX = re.compile(r"_(TRAIN|TEST)$", re.IGNORECASE)
PROBLEM_EXTENSIONS = (".ts", ".tsv", ".txt", ".csv")


def _parse_values(tokens: list[str], line_number: int, path: str) -> list[float]:
    values = []
    for token in tokens:
        token = token.strip()
        if token.lower() in MISSING_TOKENS:
            raise UnsupportedDatasetError(
                f"{path}:{line_number}: missing value in series",
                details={"line": line_number, "path": path},
            )
        try:
            value = float(token)
        except ValueError:
            raise DatasetParseError(
                f"not a number: '{token}'", line_number=line_number, path=path
            ) from None
        if not np.isfinite(value):
            raise UnsupportedDatasetError(
                f"{path}:{line_number}: non-finite value '{token}'",
                details={"line": line_number, "path": path},
            )
        values.append(value)
    return values


def _check_length(values: list[float], expected: Optional[int], line_number: int, path: str) -> int:
    if expected is not None and len(values) != expected:
        raise UnequalLengthError(
            f"series has {len(values)} values, expected {expected}",
            line_number=line_number,
            path=path,
        )
    return len(values)


def _split_plain(line: str) -> list[str]:
    if "\t" in line:
        return line.split("\t")
    if "," in line:
        return line.split(",")
    return line.split()


def _default_name(path: str) -> str:
    stem = os.path.splitext(os.path.basename(path))[0]
    return SPLIT_SUFFIX.sub("", stem)


def parse_ucr_lines(lines: list[str], path: str = "<data>", name: Optional[str] = None) -> Dataset:
    """
    Parse the lines of a ``.ts`` or plain delimited dataset.

    Raises:
        DatasetParseError: On a malformed line (the message names the line).
        UnequalLengthError: If a series length differs from the first one's.
        UnsupportedDatasetError: On missing values or a multivariate header.
    """
    headers: dict[str, str] = {}
    in_data = False
    is_ts = any(line.lstrip().startswith("@") for line in lines)
    series: list[list[float]] = []
    labels: list[str] = []
    length: Optional[int] = None

    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if is_ts and not in_data:
            if not line.startswith("@"):
                raise DatasetParseError(
                    "data line before @data", line_number=line_number, path=path
                )
            key, _, value = line[1:].partition(" ")
            key = key.lower()
            if key == "data":
                in_data = True
                continue
            headers[key] = value.strip()
            if key == "univariate" and value.strip().lower() == "false":
                raise UnsupportedDatasetError(f"{path}: multivariate problems are not supported")
            if key == "serieslength":
                try:
                    length = int(value)
                except ValueError:
                    raise DatasetParseError(
                        "@seriesLength must be an integer", line_number=line_number, path=path
                    ) from None
            continue
        if is_ts:
            has_labels = headers.get("classlabel", "true").split()[0].lower() != "false"
            if has_labels:
                body, sep, label = line.rpartition(":")
                if not sep:
                    raise DatasetParseError(
                        "expected 'v1,...,vm:label'", line_number=line_number, path=path
                    )
                if ":" in body:
                    raise UnsupportedDatasetError(f"{path}:{line_number}: multivariate case")
                label = label.strip()
            else:
                body, label = line, None
            values = _parse_values(body.split(","), line_number, path)
        else:
            tokens = _split_plain(line)
            if len(tokens) < 2:
                raise DatasetParseError(
                    "expected a label followed by values", line_number=line_number, path=path
                )
            label = tokens[0].strip()
            values = _parse_values(tokens[1:], line_number, path)
            # the archive's tsv files write integer labels as floats
            try:
                as_float = float(label)
                if as_float.is_integer():
                    label = str(int(as_float))
            except ValueError:
                pass
        length = _check_length(values, length, line_number, path)
        series.append(values)
        if label is not None:
            labels.append(label)

    if not series:
        raise DatasetError(f"{path}: no series found")
    dataset_name = name or headers.get("problemname") or _default_name(path)
    return Dataset(X=np.asarray(series, dtype=np.float64), labels=labels or None, name=dataset_name)


def load_ucr_dataset(path: str, name: Optional[str] = None) -> Dataset:
    """
    Load one split of a UCR problem.

    Args:
        path (str): A ``.ts`` file or a delimited file with labels first.
        name (str, optional): Problem name; defaults to ``@problemName`` or the
            file name without its ``_TRAIN``/``_TEST`` suffix.
    """
    if not os.path.isfile(path):
        raise DatasetError(f"Dataset file not found: {path}", details={"path": path})
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    dataset = parse_ucr_lines(lines, path=path, name=name)
    logger.debug(
        f"Loaded {dataset.name} from {path}: "
        f"{dataset.n_cases} series of length {dataset.series_length}"
    )
    return dataset


def find_problem_file(root: str, name: str, split: str) -> str:
    for ext in PROBLEM_EXTENSIONS:
        for candidate in (
            os.path.join(root, name, f"{name}_{split}{ext}"),
            os.path.join(root, f"{name}_{split}{ext}"),
        ):
            if os.path.isfile(candidate):
                return candidate
    raise DatasetError(
        f"No {split} file for problem {name} under {root}", details={"root": root, "name": name}
    )


def load_ucr_problem(root: str, name: str) -> tuple[Dataset, Dataset]:
    """Train and test splits of the problem ``name`` under ``root``."""
    train = load_ucr_dataset(find_problem_file(root, name, "TRAIN"), name=name)
    test = load_ucr_dataset(find_problem_file(root, name, "TEST"), name=name)
    if train.series_length != test.series_length:
        raise UnsupportedDatasetError(
            f"{name}: train length {train.series_length} "
            f"differs from test length {test.series_length}"
        )
    return train, test


def min_class_size(D: Dataset) -> int:
    if D.labels is None:
        raise DatasetError(f"{D.name} has no class labels")
    return min(Counter(D.labels.tolist()).values())


def write_ucr_dataset(D: Dataset, path: str) -> None:
    """Write a dataset in the ``.ts`` format; values use ``repr`` so they reload exactly."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    has_labels = D.labels is not None
    lines = [
        f"@problemName {D.name}",
        "@timeStamps false",
        "@missing false",
        "@univariate true",
        "@equalLength true",
        f"@seriesLength {D.series_length}",
        f"@classLabel true {' '.join(D.classes)}" if has_labels else "@classLabel false",
        "@data",
    ]
    for i, x in enumerate(D.X):
        body = ",".join(repr(float(v)) for v in x)
        lines.append(f"{body}:{D.labels[i]}" if has_labels else body)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
