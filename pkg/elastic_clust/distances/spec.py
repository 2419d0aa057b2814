"""
Distance specifications: a measure name plus its parameter bundle.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any

from elastic_clust.errors import ParameterError, UnknownDistanceError

DISTANCE_NAMES = ("ed", "dtw", "ddtw", "wdtw", "wddtw", "lcss", "edr", "erp", "msm", "twe")

# Parameters each measure reads; the others ride along untouched.
MEASURE_PARAMETERS = {
    "ed": (),
    "dtw": ("window",),
    "ddtw": ("window",),
    "wdtw": ("g",),
    "wddtw": ("g",),
    "lcss": ("epsilon",),
    "edr": ("epsilon", "edr_normalize"),
    "erp": ("gap",),
    "msm": ("c",),
    "twe": ("nu", "lmbda"),
}

# CLI / results-file spellings of the parameter fields
PARAMETER_ALIASES = {"lambda": "lmbda", "cost": "c", "w": "window", "metric": "name"}


@dataclass(frozen=True)
class DistanceSpec:
    """
    A named elastic distance and its parameters.

    Defaults follow the standard parameter table: DTW/DDTW window 0.2, WDTW/WDDTW
    weight steepness 0.05, LCSS/EDR threshold 0.05, ERP gap value 0.05,
    MSM cost 1, TWE stiffness 0.05 and edit penalty 1. The WDTW weight upper
    bound is fixed at 1.

    Attributes:
        name (str): One of ``DISTANCE_NAMES``.
        window (float): Sakoe-Chiba band as a fraction of the series length.
        g (float): Logistic weight steepness (wdtw, wddtw).
        epsilon (float): Match threshold (lcss, edr).
        gap (float): Reference value gaps are measured against (erp).
        c (float): Split/merge cost (msm).
        nu (float): Stiffness (twe).
        lmbda (float): Edit penalty (twe).
        edr_normalize (bool): Divide the EDR edit count by the series length.
    """

    name: str = "dtw"
    window: float = 0.2
    g: float = 0.05
    epsilon: float = 0.05
    gap: float = 0.05
    c: float = 1.0
    nu: float = 0.05
    lmbda: float = 1.0
    edr_normalize: bool = False

    def __post_init__(self) -> None:
        name = str(self.name).lower()
        if name not in DISTANCE_NAMES:
            raise UnknownDistanceError(
                f"Unknown distance '{self.name}'. Known: {', '.join(DISTANCE_NAMES)}",
                details={"name": self.name},
            )
        object.__setattr__(self, "name", name)
        for field_name in ("window", "g", "epsilon", "gap", "c", "nu", "lmbda"):
            object.__setattr__(self, field_name, float(getattr(self, field_name)))
        if not 0.0 <= self.window <= 1.0:
            raise ParameterError(f"window must lie in [0, 1], got {self.window}")
        for field_name in ("g", "epsilon", "c", "nu", "lmbda"):
            if getattr(self, field_name) < 0.0:
                raise ParameterError(
                    f"{field_name} must be nonnegative, got {getattr(self, field_name)}"
                )
        object.__setattr__(self, "edr_normalize", bool(self.edr_normalize))

    @classmethod
    def create(cls, name: str, **params: Any) -> "DistanceSpec":
        """Build a spec accepting CLI-style aliases (``lambda``, ``cost``, ``w``)."""
        return cls(name=name, **_canonical_params(params))

    def with_params(self, **params: Any) -> "DistanceSpec":
        return dataclasses.replace(self, **_canonical_params(params))

    @property
    def relevant_parameters(self) -> dict[str, Any]:
        return {key: getattr(self, key) for key in MEASURE_PARAMETERS[self.name]}

    def to_param_string(self) -> str:
        """Canonical ``key=value`` string, sorted by key, joined with ``;``."""
        values = dataclasses.asdict(self)
        name = values.pop("name")
        parts = [f"metric={name}"] + [
            f"{key}={_format_value(values[key])}" for key in sorted(values)
        ]
        return ";".join(parts)

    @classmethod
    def from_param_string(cls, text: str) -> "DistanceSpec":
        params: dict[str, Any] = {}
        for part in text.strip().split(";"):
            if not part:
                continue
            key, sep, value = part.partition("=")
            if not sep:
                raise ParameterError(f"Malformed parameter '{part}' in '{text}'")
            params[key.strip()] = value.strip()
        params = _canonical_params(params)
        name = params.pop("name", None)
        if name is None:
            raise ParameterError(f"Parameter string has no metric: '{text}'")
        known = {f.name for f in dataclasses.fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, value in params.items():
            if key not in known:
                continue
            kwargs[key] = value.lower() == "true" if key == "edr_normalize" else float(value)
        return cls(name=name, **kwargs)

    def __str__(self) -> str:
        params = ",".join(f"{k}={_format_value(v)}" for k, v in self.relevant_parameters.items())
        return f"{self.name}({params})"


def _canonical_params(params: dict[str, Any]) -> dict[str, Any]:
    return {PARAMETER_ALIASES.get(key, key): value for key, value in params.items()}


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)
