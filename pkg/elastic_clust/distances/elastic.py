"""
The ten elastic distance measures.

Each measure has a raw kernel registered in `elastic_clust.distances.registry`
and a public function that validates its inputs first. Public functions take
either a `DistanceSpec` or keyword parameters:

    >>> dtw(a, b, window=0.1)
    >>> dtw(a, b, DistanceSpec("dtw", window=0.1))

DTW-family measures accumulate squared differences and return the path sum
without a square root. ERP, MSM and TWE use absolute differences.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Optional

import numpy as np

from elastic_clust.distances import _kernels
from elastic_clust.distances.alignment import (
    AlignmentPath,
    CostMatrix,
    trace_lcss_matches,
    trace_path,
)
from elastic_clust.distances.registry import get_measure, register, resolve_distance
from elastic_clust.distances.spec import DistanceSpec
from elastic_clust.errors import ParameterError
from elastic_clust.series import TimeSeries, as_series, check_same_length, derivative_transform

logger = logging.getLogger(__name__)

WDTW_MAX_WEIGHT = 1.0

DTW_FAMILY = ("dtw", "ddtw", "wdtw", "wddtw")


def band_radius(window: float, length: int) -> int:
    """Sakoe-Chiba radius ``floor(window * length)``; cells with ``|i-j| <= r`` are inside."""
    if not 0.0 <= window <= 1.0:
        raise ParameterError(f"window must lie in [0, 1], got {window}")
    # guard against 0.29 * 100 == 28.999999999999996
    return int(math.floor(window * length + 1e-9))


def wdtw_weights(length: int, g: float) -> np.ndarray:
    """Logistic weights ``w(d) = w_max / (1 + exp(-g (d - m/2)))`` for ``d = 0 .. m-1``."""
    d = np.arange(max(length, 1), dtype=np.float64)
    return WDTW_MAX_WEIGHT / (1.0 + np.exp(-g * (d - length / 2.0)))


def _spec(name: str, spec: Optional[DistanceSpec], params: dict[str, Any]) -> DistanceSpec:
    if spec is None:
        return DistanceSpec.create(name, **params)
    return spec.with_params(name=name, **params)


def _prepared_pair(
    a: TimeSeries, b: TimeSeries, spec: DistanceSpec
) -> tuple[np.ndarray, np.ndarray]:
    measure = get_measure(spec.name)
    a = as_series(a)
    b = as_series(b)
    check_same_length(a, b)
    return measure.prepare(a), measure.prepare(b)


# ---------------------------------------------------------------------------
# Raw kernels (inputs already validated and transformed)
# ---------------------------------------------------------------------------


def _grid(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> CostMatrix:
    m = a.shape[0]
    name = spec.name
    if name in ("dtw", "ddtw"):
        radius = band_radius(spec.window, m)
        values = _kernels.dtw_matrix(a, b, radius, np.ones(max(m, 1)))
    elif name in ("wdtw", "wddtw"):
        radius = m
        values = _kernels.dtw_matrix(a, b, radius, wdtw_weights(m, spec.g))
    elif name == "lcss":
        radius = m
        values = _kernels.lcss_matrix(a, b, spec.epsilon)
    elif name == "edr":
        radius = m
        values = _kernels.edr_matrix(a, b, spec.epsilon)
    elif name == "erp":
        radius = m
        values = _kernels.erp_matrix(a, b, spec.gap)
    elif name == "msm":
        radius = m
        values = _kernels.msm_matrix(a, b, spec.c)
    elif name == "twe":
        radius = m
        values = _kernels.twe_matrix(a, b, spec.nu, spec.lmbda)
    else:
        raise ParameterError(f"Distance '{name}' has no cost matrix")
    values.flags.writeable = False
    return CostMatrix(values=values, radius=radius, measure=name)


@register("ed")
def _euclidean(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> float:
    diff = a - b
    return float(np.sqrt(np.dot(diff, diff)))


@register("ddtw", transform=derivative_transform, min_length=3)
@register("dtw")
def _dtw(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> float:
    m = a.shape[0]
    values = _kernels.dtw_matrix(a, b, band_radius(spec.window, m), np.ones(m))
    return float(values[m, m])


@register("wddtw", transform=derivative_transform, min_length=3)
@register("wdtw")
def _wdtw(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> float:
    m = a.shape[0]
    values = _kernels.dtw_matrix(a, b, m, wdtw_weights(m, spec.g))
    return float(values[m, m])


@register("lcss")
def _lcss(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> float:
    m = a.shape[0]
    return 1.0 - _kernels.lcss_matrix(a, b, spec.epsilon)[m, m] / m


@register("edr")
def _edr(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> float:
    m = a.shape[0]
    count = float(_kernels.edr_matrix(a, b, spec.epsilon)[m, m])
    return count / m if spec.edr_normalize else count


@register("erp")
def _erp(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> float:
    m = a.shape[0]
    return float(_kernels.erp_matrix(a, b, spec.gap)[m, m])


@register("msm")
def _msm(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> float:
    m = a.shape[0]
    return float(_kernels.msm_matrix(a, b, spec.c)[m, m])


@register("twe")
def _twe(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> float:
    m = a.shape[0]
    return float(_kernels.twe_matrix(a, b, spec.nu, spec.lmbda)[m, m])


# ---------------------------------------------------------------------------
# Public measures
# ---------------------------------------------------------------------------


def euclidean(a: TimeSeries, b: TimeSeries) -> float:
    """
    Euclidean (L2) distance between two equal-length series.

    Raises:
        ShapeMismatchError: If the lengths differ.
    """
    spec = DistanceSpec("ed")
    return _euclidean(*_prepared_pair(a, b, spec), spec)


def dtw(a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any) -> float:
    """
    Dynamic time warping distance inside a Sakoe-Chiba band.

    Args:
        a, b: Equal-length series.
        spec (DistanceSpec, optional): Parameters; ``window`` is read.
        **params: Parameter overrides (``window=0.1``).

    Returns:
        float: Minimum over band-feasible warping paths of the summed squared
        differences.
    """
    spec = _spec("dtw", spec, params)
    return _dtw(*_prepared_pair(a, b, spec), spec)


def dtw_cost_matrix(
    a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any
) -> CostMatrix:
    spec = _spec("dtw", spec, params)
    return _grid(*_prepared_pair(a, b, spec), spec)


def dtw_alignment_path(
    a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any
) -> tuple[AlignmentPath, float]:
    """Optimal DTW warping path and its distance."""
    return alignment_path(a, b, _spec("dtw", spec, params))


def ddtw(a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any) -> float:
    """DTW between the derivative series; the window applies to length ``m - 2``."""
    spec = _spec("ddtw", spec, params)
    return _dtw(*_prepared_pair(a, b, spec), spec)


def wdtw(a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any) -> float:
    """
    Weighted DTW over the full matrix.

    The squared difference of cell ``(i, j)`` is scaled by a logistic weight of
    ``|i - j|`` with steepness ``g``, centred on ``m / 2``.
    """
    spec = _spec("wdtw", spec, params)
    return _wdtw(*_prepared_pair(a, b, spec), spec)


def wddtw(
    a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any
) -> float:
    spec = _spec("wddtw", spec, params)
    return _wdtw(*_prepared_pair(a, b, spec), spec)


def lcss_match_length(
    a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any
) -> int:
    """Length of the longest common subsequence with matches ``|a_i - b_j| < epsilon``."""
    spec = _spec("lcss", spec, params)
    a, b = _prepared_pair(a, b, spec)
    m = a.shape[0]
    return int(_kernels.lcss_matrix(a, b, spec.epsilon)[m, m])


def lcss(a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any) -> float:
    """LCSS distance ``1 - L / m``, in ``[0, 1]``."""
    spec = _spec("lcss", spec, params)
    return _lcss(*_prepared_pair(a, b, spec), spec)


def edr(a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any) -> float:
    """
    Edit distance on real sequences.

    Returns the raw edit count; set ``edr_normalize`` to divide by the length.
    """
    spec = _spec("edr", spec, params)
    return _edr(*_prepared_pair(a, b, spec), spec)


def erp(a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any) -> float:
    """
    Edit distance with real penalty.

    Gaps cost the absolute difference between the skipped value and ``gap``;
    the first row and column hold cumulative gap costs.
    """
    spec = _spec("erp", spec, params)
    return _erp(*_prepared_pair(a, b, spec), spec)


def msm_cost(x: float, y: float, z: float, c: float = 1.0) -> float:
    """
    Cost of a split or merge producing ``x`` next to neighbours ``y`` and ``z``.

    ``c`` when ``x`` lies between ``y`` and ``z`` (inclusive), otherwise
    ``c`` plus the distance from ``x`` to the nearer of the two.
    """
    return float(_kernels.msm_cost(float(x), float(y), float(z), float(c)))


def msm(a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any) -> float:
    """Move-split-merge distance with split/merge cost ``c``."""
    spec = _spec("msm", spec, params)
    return _msm(*_prepared_pair(a, b, spec), spec)


def twe(a: TimeSeries, b: TimeSeries, spec: Optional[DistanceSpec] = None, **params: Any) -> float:
    """
    Time warp edit distance with stiffness ``nu`` and edit penalty ``lmbda``.

    Both series get a synthetic leading 0 so every first element has a
    predecessor.
    """
    spec = _spec("twe", spec, params)
    return _twe(*_prepared_pair(a, b, spec), spec)


# ---------------------------------------------------------------------------
# Name-dispatched forms
# ---------------------------------------------------------------------------


def cost_matrix(
    a: TimeSeries, b: TimeSeries, spec: DistanceSpec | str, **params: Any
) -> CostMatrix:
    """
    Accumulated ``(m+1, m+1)`` matrix of any measure except ``ed``.

    For LCSS the grid holds match counts rather than costs.
    """
    if isinstance(spec, str):
        spec = DistanceSpec.create(spec, **params)
    elif params:
        spec = spec.with_params(**params)
    if spec.name == "ed":
        raise ParameterError("Euclidean distance has no cost matrix")
    return _grid(*_prepared_pair(a, b, spec), spec)


def warping_path(a: np.ndarray, b: np.ndarray, spec: DistanceSpec) -> tuple[np.ndarray, float]:
    """
    Optimal DTW-family path on prepared series, as an ``(k, 2)`` 1-based array.

    Ties prefer the diagonal, then vertical, then horizontal predecessor.
    """
    m = a.shape[0]
    if spec.name in ("wdtw", "wddtw"):
        pairs, dist = _kernels.dtw_path(a, b, m, wdtw_weights(m, spec.g))
    else:
        pairs, dist = _kernels.dtw_path(a, b, band_radius(spec.window, m), np.ones(m))
    return pairs, float(dist)


def _move_costs(
    a: np.ndarray, b: np.ndarray, spec: DistanceSpec
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n, m = a.shape[0], b.shape[0]
    diag = np.zeros((n + 1, m + 1))
    vert = np.zeros((n + 1, m + 1))
    horiz = np.zeros((n + 1, m + 1))
    name = spec.name
    absdiff = np.abs(a[:, None] - b[None, :])
    if name == "edr":
        diag[1:, 1:] = (absdiff >= spec.epsilon).astype(np.float64)
        vert[1:, 1:] = 1.0
        horiz[1:, 1:] = 1.0
    elif name == "erp":
        diag[1:, 1:] = absdiff
        vert[1:, 1:] = np.abs(a - spec.gap)[:, None]
        horiz[1:, 1:] = np.abs(b - spec.gap)[None, :]
    elif name == "msm":
        diag[1:, 1:] = absdiff
        vert[2:, 1:] = _msm_cost_grid(a[1:, None], a[:-1, None], b[None, :], spec.c)
        horiz[1:, 2:] = _msm_cost_grid(b[None, 1:], a[:, None], b[None, :-1], spec.c)
    elif name == "twe":
        ap = np.concatenate(([0.0], a))
        bp = np.concatenate(([0.0], b))
        offsets = np.abs(np.subtract.outer(np.arange(1, n + 1), np.arange(1, m + 1)))
        diag[1:, 1:] = absdiff + np.abs(ap[:-1, None] - bp[None, :-1]) + 2.0 * spec.nu * offsets
        vert[1:, 1:] = (np.abs(np.diff(ap)) + spec.nu + spec.lmbda)[:, None]
        horiz[1:, 1:] = (np.abs(np.diff(bp)) + spec.nu + spec.lmbda)[None, :]
    return diag, vert, horiz


def _msm_cost_grid(x: np.ndarray, y: np.ndarray, z: np.ndarray, c: float) -> np.ndarray:
    x, y, z = np.broadcast_arrays(x, y, z)
    between = ((y <= x) & (x <= z)) | ((y >= x) & (x >= z))
    return np.where(between, c, c + np.minimum(np.abs(x - y), np.abs(x - z)))


def alignment_path(
    a: TimeSeries, b: TimeSeries, spec: DistanceSpec | str, **params: Any
) -> tuple[AlignmentPath, float]:
    """
    Alignment of two series under any measure with a cost matrix.

    Args:
        a, b: Equal-length series.
        spec: A `DistanceSpec` or a measure name plus keyword parameters.

    Returns:
        tuple[AlignmentPath, float]: The path and the measure's distance. For
        the DTW family the path is optimal and its summed pointwise costs
        equal the distance. For edit measures the path follows the
        predecessor that reproduces each cell, so cells reached through a
        boundary row or column are approximated. For LCSS the path lists the
        matched pairs only.
    """
    if isinstance(spec, str):
        spec = DistanceSpec.create(spec, **params)
    elif params:
        spec = spec.with_params(**params)
    if spec.name == "ed":
        raise ParameterError("Euclidean distance has no alignment path")
    a, b = _prepared_pair(a, b, spec)
    if spec.name in DTW_FAMILY:
        pairs, dist = warping_path(a, b, spec)
        return AlignmentPath.from_array(pairs), dist
    grid = _grid(a, b, spec)
    measure = get_measure(spec.name)
    dist = float(measure.kernel(a, b, spec))
    if spec.name == "lcss":
        return trace_lcss_matches(grid, a, b, spec.epsilon), dist
    diag, vert, horiz = _move_costs(a, b, spec)
    path = trace_path(grid, diag, vert, horiz)
    logger.debug(f"{spec}: path of {len(path)} steps, distance {dist:.6g}")
    return path, dist


def distance(
    a: TimeSeries, b: TimeSeries, metric: DistanceSpec | str = "dtw", **params: Any
) -> float:
    """One-shot ``resolve_distance(metric, **params)(a, b)``."""
    return resolve_distance(metric, **params)(a, b)
