"""
Exception hierarchy for elastic_clust.

Every error raised on purpose by the toolkit derives from `ElasticClustError`,
so callers (the CLI in particular) can catch one type. Where a builtin
exception has the same meaning, the subclass derives from it as well.
"""

from typing import Any, Optional


class ElasticClustError(Exception):
    """
    Base class for toolkit errors.

    Args:
        message (str): Human readable error message.
        details (Any, optional): Extra structured context (offending values,
            line numbers, parameter names).
    """

    def __init__(self, message: str, details: Optional[Any] = None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class InvalidSeriesError(ElasticClustError, ValueError):
    """A series holds non-finite values or is not one-dimensional."""


class SeriesTooShortError(InvalidSeriesError):
    """A series is too short for the requested transform."""


class ShapeMismatchError(ElasticClustError, ValueError):
    """Series (or datasets) that must share a length do not."""


class ParameterError(ElasticClustError, ValueError):
    """A distance or clustering parameter is out of range."""


class UnknownDistanceError(ElasticClustError, KeyError):
    """The distance registry has no measure with the requested name."""

    def __str__(self) -> str:
        return self.message


class EmptyClusterError(ElasticClustError, ValueError):
    """An averaging or medoid operation received no members."""


class ClusteringConfigError(ElasticClustError, ValueError):
    """A clustering configuration cannot be fitted on the given data."""


class DegenerateClusteringError(ElasticClustError):
    """A clustering has too few clusters or coincident centroids for the index."""


class UndefinedTestError(ElasticClustError):
    """A statistical test is undefined for the input (e.g. all differences zero)."""


class DatasetError(ElasticClustError):
    """Base class for dataset loading problems."""


class DatasetParseError(DatasetError, ValueError):
    """A dataset file contains a malformed line."""

    def __init__(self, message: str, line_number: Optional[int] = None, path: Optional[str] = None):
        self.line_number = line_number
        self.path = path
        if line_number is not None:
            message = f"{path or '<data>'}:{line_number}: {message}"
        super().__init__(message, details={"line": line_number, "path": path})


class UnsupportedDatasetError(DatasetError):
    """The dataset is excluded from the protocol (unequal length, missing values, ...)."""


class UnequalLengthError(UnsupportedDatasetError, DatasetParseError):
    """A series in a dataset file does not match the length of the others."""


class OverwriteRefusedError(ElasticClustError, FileExistsError):
    """A results file exists and overwriting was not requested."""


class ResultsFormatError(ElasticClustError, ValueError):
    """A results file does not follow the results format."""
