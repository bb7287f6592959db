"""Filter characteristics on [0, pi] and their images under x = x0*cos(omega/2).

A FilterSpec is a piecewise-constant ideal magnitude; the gaps between
consecutive bands are transition bands.  build_object_function turns a spec
into the function of x that the Legendre machinery approximates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "Band",
    "FilterSpec",
    "ObjectFunction",
    "omega_to_x",
    "x_to_omega",
    "build_object_function",
    "hp_lp_complement",
    "spec_to_json_dict",
    "spec_from_json_dict",
]

_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class Band:
    """One constant-level band [omega_start, omega_end) in rad/sample."""

    omega_start: float
    omega_end: float
    level: float


@dataclass(frozen=True)
class FilterSpec:
    """Ideal piecewise-constant magnitude characteristic over [0, pi].

    Bands must start at 0, end at pi, be strictly increasing, and leave a
    nonempty transition gap between consecutive bands.  Levels are finite
    and non-negative.
    """

    bands: tuple[Band, ...]
    x0: float = 1.0

    def __post_init__(self):
        bands = tuple(
            b if isinstance(b, Band) else Band(*b) for b in self.bands
        )
        if not bands:
            raise ValueError("spec needs at least one band")
        if abs(bands[0].omega_start) > _EDGE_TOL:
            raise ValueError("first band must start at omega = 0")
        if abs(bands[-1].omega_end - math.pi) > _EDGE_TOL:
            raise ValueError("last band must end at omega = pi")
        for b in bands:
            if not (b.omega_end > b.omega_start):
                raise ValueError(f"band [{b.omega_start}, {b.omega_end}) is empty")
            if not (math.isfinite(b.level) and b.level >= 0):
                raise ValueError(f"band level must be finite and >= 0, got {b.level}")
        for prev, nxt in zip(bands[:-1], bands[1:]):
            if not (nxt.omega_start > prev.omega_end):
                raise ValueError(
                    "consecutive bands must be separated by a nonempty transition gap"
                )
        if not (self.x0 > 0 and math.isfinite(self.x0)):
            raise ValueError(f"x0 must be positive, got {self.x0}")
        object.__setattr__(self, "bands", bands)
        object.__setattr__(self, "x0", float(self.x0))


@dataclass(frozen=True)
class ObjectFunction:
    """A FilterSpec re-expressed as a continuous function of x on [0, x0].

    ``breakpoints`` are the x-images of the interior band edges, where the
    function has kinks; integration routines split panels there.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    provenance: FilterSpec
    breakpoints: tuple[float, ...] = field(default_factory=tuple)

    def __call__(self, x):
        return self.eval(x)


def omega_to_x(omega, x0: float = 1.0):
    """Map omega in [0, pi] to x = x0*cos(omega/2); decreasing in omega."""
    arr = np.asarray(omega, dtype=float)
    if np.any(arr < -_EDGE_TOL) or np.any(arr > math.pi + _EDGE_TOL):
        raise ValueError("omega outside [0, pi]")
    result = x0 * np.cos(np.clip(arr, 0.0, math.pi) / 2.0)
    return float(result) if np.isscalar(omega) or arr.ndim == 0 else result


def x_to_omega(x, x0: float = 1.0):
    """Inverse transform omega = 2*acos(x/x0) for x in [0, x0]."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -_EDGE_TOL * x0) or np.any(arr > x0 * (1.0 + _EDGE_TOL)):
        raise ValueError(f"x outside [0, {x0}]")
    result = 2.0 * np.arccos(np.clip(arr / x0, 0.0, 1.0))
    return float(result) if np.isscalar(x) or arr.ndim == 0 else result


def _level_of_omega(spec: FilterSpec, omega: np.ndarray) -> np.ndarray:
    """Ideal level at each omega: band level inside bands, linear ramp in gaps."""
    starts = np.array([b.omega_start for b in spec.bands])
    ends = np.array([b.omega_end for b in spec.bands])
    levels = np.array([b.level for b in spec.bands])

    # Index of the band whose start is at or below omega.
    idx = np.clip(np.searchsorted(starts, omega, side="right") - 1, 0, len(starts) - 1)
    inside = omega < ends[idx]
    inside |= idx == len(starts) - 1  # level of the last band applies at pi

    out = levels[idx].astype(float)
    gap = ~inside
    if np.any(gap):
        g = idx[gap]
        frac = (omega[gap] - ends[g]) / (starts[g + 1] - ends[g])
        out[gap] = levels[g] + (levels[g + 1] - levels[g]) * frac
    return out


def build_object_function(spec: FilterSpec, x0: float | None = None) -> ObjectFunction:
    """Express the spec as a continuous function of x on [0, x0].

    Band interiors map to their exact level; transition gaps interpolate the
    level linearly in omega, composed with the cosine transform (which gives
    the mild curvature of the transition in x).
    """
    if x0 is None:
        x0 = spec.x0

    def evaluate(x):
        arr = np.asarray(x, dtype=float)
        omega = x_to_omega(np.atleast_1d(arr).ravel(), x0)
        values = _level_of_omega(spec, omega)
        if np.isscalar(x) or arr.ndim == 0:
            return float(values[0])
        return values.reshape(arr.shape)

    interior = [
        edge
        for b in spec.bands
        for edge in (b.omega_start, b.omega_end)
        if _EDGE_TOL < edge < math.pi - _EDGE_TOL
    ]
    breaks = tuple(sorted(omega_to_x(np.array(interior), x0))) if interior else ()
    return ObjectFunction(evaluate, spec, breaks)


def hp_lp_complement(lp: FilterSpec, lo_level: float, hi_level: float) -> FilterSpec:
    """High-pass companion of a two-band low-pass spec, sharing its edges.

    The companion carries ``lo_level`` over the low-pass passband and
    ``hi_level`` over its stopband, so the pair's transition bands overlap
    with opposite slopes.  ``lo_level`` must be positive: the companion
    serves as a ratio denominator and must never reach zero.
    """
    if len(lp.bands) != 2:
        raise ValueError("complement needs a two-band low-pass spec (passband + stopband)")
    if not (lo_level > 0):
        raise ValueError(
            "lo_level must be positive: a zero level would put denominator zeros in band"
        )
    pass_band, stop_band = lp.bands
    return FilterSpec(
        (
            Band(pass_band.omega_start, pass_band.omega_end, float(lo_level)),
            Band(stop_band.omega_start, stop_band.omega_end, float(hi_level)),
        ),
        x0=lp.x0,
    )


def spec_to_json_dict(spec: FilterSpec) -> dict:
    return {
        "bands": [
            {"omega_start": b.omega_start, "omega_end": b.omega_end, "level": b.level}
            for b in spec.bands
        ],
        "x0": spec.x0,
    }


def spec_from_json_dict(data: dict) -> FilterSpec:
    try:
        bands = tuple(
            Band(float(b["omega_start"]), float(b["omega_end"]), float(b["level"]))
            for b in data["bands"]
        )
        x0 = float(data.get("x0", 1.0))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed filter spec: {exc}") from exc
    return FilterSpec(bands, x0=x0)
