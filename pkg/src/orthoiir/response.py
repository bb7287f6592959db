"""Frequency response of a pole-zero model: magnitude, phase, group delay.

The response at e^(j*omega) is the gain times the product of distances to the
zeros over the product of distances to the poles, carried in full complex
form.  Factor magnitudes accumulate in the log domain so high-order models
neither overflow nor underflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import math

import numpy as np

if TYPE_CHECKING:
    from .iir import PoleZeroModel

__all__ = ["ResponseCurve", "eval_model", "sweep", "curve_to_csv", "curve_to_json_dict"]

# |H| below this reports the -inf dB sentinel instead of propagating NaN.
DB_FLOOR = 1e-300

POLE_HIT_TOL = 1e-12


@dataclass(frozen=True)
class ResponseCurve:
    """Sampled complex response with derived magnitude, phase, and delay."""

    omegas: np.ndarray
    values: np.ndarray
    magnitude_db: np.ndarray
    phase_unwrapped: np.ndarray
    group_delay: np.ndarray


def _eval_points(zeros: np.ndarray, poles: np.ndarray, gain: float, omegas: np.ndarray) -> np.ndarray:
    e = np.exp(1j * omegas)
    log_mag = np.full(omegas.shape, math.log(abs(gain)))
    phase = np.full(omegas.shape, 0.0 if gain > 0 else math.pi)
    for p in poles:
        d = e - p
        hit = np.abs(d) < POLE_HIT_TOL
        if np.any(hit):
            idx = int(np.nonzero(hit)[0][0])
            raise ValueError(
                f"evaluation at pole: omega={omegas[idx]!r} (grid index {idx}) "
                f"coincides with pole {p!r}"
            )
        log_mag -= np.log(np.abs(d))
        phase -= np.angle(d)
    zero_hit = np.zeros(omegas.shape, dtype=bool)
    with np.errstate(divide="ignore"):
        for z in zeros:
            d = e - z
            mag = np.abs(d)
            zero_hit |= mag == 0.0
            log_mag += np.log(mag)
            phase += np.angle(d)
    values = np.exp(log_mag) * np.exp(1j * phase)
    values[zero_hit] = 0.0
    return values


def eval_model(model: "PoleZeroModel", omega: float) -> complex:
    """Complex response of the model at one frequency in [0, pi]."""
    if not 0.0 <= omega <= math.pi + 1e-12:
        raise ValueError("omega outside [0, pi]")
    values = _eval_points(
        model.zeros.expand(), model.poles.expand(), model.gain, np.array([float(omega)])
    )
    return complex(values[0])


def sweep(model: "PoleZeroModel", n_points: int = 2048) -> ResponseCurve:
    """Evaluate the model on a uniform grid over [0, pi].

    Phase is unwrapped so adjacent differences stay within pi; group delay is
    the negated central difference of the unwrapped phase (one-sided at the
    endpoints).  Grid evaluation is vectorized and order-deterministic.
    """
    if n_points < 16:
        raise ValueError(f"n_points must be at least 16, got {n_points}")
    omegas = np.linspace(0.0, math.pi, n_points)
    values = _eval_points(model.zeros.expand(), model.poles.expand(), model.gain, omegas)

    magnitude = np.abs(values)
    with np.errstate(divide="ignore"):
        magnitude_db = np.where(
            magnitude >= DB_FLOOR, 20.0 * np.log10(np.maximum(magnitude, DB_FLOOR)), -np.inf
        )

    phase = np.unwrap(np.angle(values))
    step = omegas[1] - omegas[0]
    group_delay = np.empty_like(phase)
    group_delay[1:-1] = -(phase[2:] - phase[:-2]) / (2.0 * step)
    group_delay[0] = -(phase[1] - phase[0]) / step
    group_delay[-1] = -(phase[-1] - phase[-2]) / step

    for arr in (omegas, values, magnitude_db, phase, group_delay):
        arr.flags.writeable = False
    return ResponseCurve(omegas, values, magnitude_db, phase, group_delay)


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def curve_to_csv(curve: ResponseCurve) -> str:
    """CSV with one row per grid point; -inf magnitudes become empty cells."""
    lines = ["omega,magnitude_db,phase_rad,group_delay"]
    for omega, db, phase, delay in zip(
        curve.omegas, curve.magnitude_db, curve.phase_unwrapped, curve.group_delay
    ):
        db_cell = "" if math.isinf(db) else _fmt(db)
        lines.append(f"{_fmt(omega)},{db_cell},{_fmt(phase)},{_fmt(delay)}")
    return "\n".join(lines) + "\n"


def curve_to_json_dict(curve: ResponseCurve) -> dict:
    """Mirror of the curve fields as JSON arrays; -inf serializes as "-inf"."""
    return {
        "omegas": [float(v) for v in curve.omegas],
        "values": [[float(v.real), float(v.imag)] for v in curve.values],
        "magnitude_db": [
            "-inf" if math.isinf(v) else float(v) for v in curve.magnitude_db
        ],
        "phase_unwrapped": [float(v) for v in curve.phase_unwrapped],
        "group_delay": [float(v) for v in curve.group_delay],
    }
