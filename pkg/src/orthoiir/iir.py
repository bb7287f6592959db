"""IIR assembly from FIR prototypes, stability audit, and pole-shift repair.

The filter is the ratio of two zero-phase prototypes.  Its zeros come from
the numerator's roots, its poles from the denominator's; reciprocal root
pairs put half the raw poles outside the unit circle, and stabilization
moves every outside pole to the origin, rescaling the gain so the response
at a reference frequency is unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bandspec import FilterSpec, build_object_function
from .fir import FirPrototype, ZeroSet, fir_zero_set, synthesize_fir, _u_roots
from .legendre import eval_series, integrated_squared_error
from .response import eval_model

__all__ = [
    "PoleZeroModel",
    "DesignReport",
    "PipelineError",
    "assemble_iir",
    "stabilize",
    "design",
    "to_ba",
    "model_to_json_dict",
    "model_from_json_dict",
    "report_to_json_dict",
]

# |z| within this band of 1 counts as "on the unit circle" for pole handling.
CIRCLE_TOL = 1e-10

# Grid density for the denominator sign scan.
DENOMINATOR_SCAN_POINTS = 4096

_REAL_ROOT_IMAG_TOL = 1e-8


class PipelineError(RuntimeError):
    """Design-pipeline failure, tagged with the stage that raised it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass(frozen=True)
class PoleZeroModel:
    """Transfer function as z-plane roots plus a real gain."""

    zeros: ZeroSet
    poles: ZeroSet
    gain: float
    stabilized: bool = False
    shifted_pole_count: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.gain) and self.gain != 0.0):
            raise ValueError(f"gain must be finite and nonzero, got {self.gain}")
        if self.shifted_pole_count < 0:
            raise ValueError("shifted_pole_count cannot be negative")
        if self.stabilized:
            radii = np.abs(self.poles.expand())
            if radii.size and np.max(radii) >= 1.0 + 1e-12:
                raise ValueError(
                    f"stabilized model has a pole at |z| = {np.max(radii)!r} >= 1"
                )

    def order(self) -> int:
        return max(self.zeros.total(), self.poles.total())


@dataclass(frozen=True)
class DesignReport:
    """Full provenance of one design run."""

    spec_lp: FilterSpec
    spec_hp: FilterSpec
    numerator: FirPrototype
    denominator: FirPrototype
    model_raw: PoleZeroModel
    model_stable: PoleZeroModel
    denominator_min: float
    notes: tuple[str, ...]


def _denominator_audit(den: FirPrototype) -> float:
    """Minimum of the denominator characteristic over [0, x0], with root audit.

    Raises when the scan shows a non-positive value or a real root of the
    polynomial in u falls inside [0, 1]: a vanishing denominator makes the
    ratio unstable by construction.
    """
    x0 = den.series.domain_max
    grid = np.linspace(0.0, x0, DENOMINATOR_SCAN_POINTS)
    lowest = float(np.min(eval_series(den.series, grid)))
    if lowest <= 0.0:
        raise ValueError(
            f"denominator vanishes in band: min over [0, {x0}] is {lowest!r}"
        )
    u_roots, _, _ = _u_roots(den)
    for u in u_roots:
        near_real = abs(u.imag) <= _REAL_ROOT_IMAG_TOL * max(1.0, abs(u))
        if near_real and -1e-12 <= u.real <= 1.0 + 1e-12:
            raise ValueError(
                f"denominator vanishes in band: real root at x = {math.sqrt(max(u.real, 0.0))!r}"
            )
    return lowest


def assemble_iir(num: FirPrototype, den: FirPrototype, kind: str = "low_pass") -> PoleZeroModel:
    """Ratio of two prototypes as a pole-zero model (numerator over denominator).

    ``num`` carries the low-pass characteristic and ``den`` the high-pass
    one; ``kind="high_pass"`` swaps the assembled zeros and poles (the
    reciprocal response).  The denominator argument must be zero-free on
    [0, x0], which is checked by a dense sign scan plus a real-root audit.
    """
    if kind not in ("low_pass", "high_pass"):
        raise ValueError(f"kind must be 'low_pass' or 'high_pass', got {kind!r}")
    _denominator_audit(den)
    zero_set, zero_gain = fir_zero_set(num)
    pole_set, pole_gain = fir_zero_set(den)
    gain = zero_gain / pole_gain
    if kind == "high_pass":
        zero_set, pole_set = pole_set, zero_set
        gain = 1.0 / gain
    return PoleZeroModel(zero_set, pole_set, gain, stabilized=False)


def stabilize(model: PoleZeroModel, reference_omega: float = 0.0) -> PoleZeroModel:
    """Move every pole outside the unit circle to the origin.

    The gain is rescaled so |H| at ``reference_omega`` is unchanged by the
    shift.  Poles on the unit circle itself cannot be repaired this way and
    raise instead.  Conjugate pole pairs sit outside together, so conjugate
    closure survives the shift; reciprocal closure does not (one member of
    each reciprocal pair moves to the origin).
    """
    if model.stabilized:
        raise ValueError("model is already stabilized")
    shifted = 0
    new_points: list[complex] = []
    for point, mult in zip(model.poles.points, model.poles.multiplicities):
        radius = abs(point)
        if radius > 1.0 + CIRCLE_TOL:
            shifted += mult
            new_points.extend([0.0 + 0.0j] * mult)
        elif radius >= 1.0 - CIRCLE_TOL:
            raise ValueError(
                f"pole on unit circle at {point!r}: shift-to-origin cannot stabilize it; "
                "raise the denominator levels instead"
            )
        else:
            new_points.extend([point] * mult)
    if shifted == 0:
        return PoleZeroModel(
            model.zeros, model.poles, model.gain, stabilized=True, shifted_pole_count=0
        )

    candidate = PoleZeroModel(
        model.zeros, ZeroSet.from_points(new_points), model.gain,
        stabilized=True, shifted_pole_count=shifted,
    )
    reference_old = abs(eval_model(model, reference_omega))
    reference_new = abs(eval_model(candidate, reference_omega))
    if not (reference_old > 0.0 and math.isfinite(reference_old)
            and reference_new > 0.0 and math.isfinite(reference_new)):
        raise ValueError(
            f"cannot renormalize gain at omega={reference_omega}: response magnitude "
            f"is {reference_old!r} before and {reference_new!r} after the shift"
        )
    return PoleZeroModel(
        candidate.zeros, candidate.poles, model.gain * (reference_old / reference_new),
        stabilized=True, shifted_pole_count=shifted,
    )


def _check_shared_edges(lp: FilterSpec, hp: FilterSpec) -> None:
    if len(lp.bands) != len(hp.bands):
        raise ValueError("specs must share band edges; band counts differ")
    for a, b in zip(lp.bands, hp.bands):
        if abs(a.omega_start - b.omega_start) > 1e-12 or abs(a.omega_end - b.omega_end) > 1e-12:
            raise ValueError(
                f"specs must share band edges: [{a.omega_start}, {a.omega_end}) vs "
                f"[{b.omega_start}, {b.omega_end})"
            )


def _root_split_note(label: str, proto: FirPrototype) -> str:
    u_roots, _, degree = _u_roots(proto)
    real = sum(
        1 for u in u_roots if abs(u.imag) <= _REAL_ROOT_IMAG_TOL * max(1.0, abs(u))
    )
    return (
        f"{label}: degree {degree} in x^2; {real} real and "
        f"{len(u_roots) - real} complex roots in u"
    )


def design(
    lp_spec: FilterSpec,
    hp_spec: FilterSpec,
    num_terms_n: int,
    num_terms_m: int,
    kind: str = "low_pass",
    reference_omega: float = 0.0,
    quad_order: int | None = None,
) -> DesignReport:
    """Run the full pipeline from a spec pair to a stabilized model.

    Builds both object functions, projects them, assembles the ratio,
    extracts roots into a pole-zero model, and stabilizes it.  Every stage
    failure is re-raised as a PipelineError naming the stage.
    """
    notes: list[str] = []
    try:
        _check_shared_edges(lp_spec, hp_spec)
    except ValueError as exc:
        raise PipelineError("spec-validation", str(exc)) from exc

    try:
        obj_lp = build_object_function(lp_spec)
        obj_hp = build_object_function(hp_spec)
    except ValueError as exc:
        raise PipelineError("object-function", str(exc)) from exc

    try:
        numerator = synthesize_fir(obj_lp, num_terms_n, quad_order)
        denominator = synthesize_fir(obj_hp, num_terms_m, quad_order)
    except ValueError as exc:
        raise PipelineError("projection", str(exc)) from exc

    fit_n = integrated_squared_error(obj_lp.eval, numerator.series, breakpoints=obj_lp.breakpoints)
    fit_m = integrated_squared_error(obj_hp.eval, denominator.series, breakpoints=obj_hp.breakpoints)
    notes.append(f"numerator fit: {num_terms_n} terms, integrated squared error {fit_n:.6g}")
    notes.append(f"denominator fit: {num_terms_m} terms, integrated squared error {fit_m:.6g}")

    try:
        denominator_min = _denominator_audit(denominator)
        model_raw = assemble_iir(numerator, denominator, kind)
    except ValueError as exc:
        raise PipelineError("assembly", str(exc)) from exc
    notes.append(_root_split_note("numerator", numerator))
    notes.append(_root_split_note("denominator", denominator))

    raw_radii = np.abs(model_raw.poles.expand())
    outside = int(np.sum(raw_radii > 1.0 + CIRCLE_TOL))
    notes.append(f"raw model: {model_raw.zeros.total()} zeros, {model_raw.poles.total()} poles, "
                 f"{outside} poles outside the unit circle")

    try:
        model_stable = stabilize(model_raw, reference_omega)
    except ValueError as exc:
        raise PipelineError("stabilization", str(exc)) from exc
    notes.append(
        f"stabilization: {model_stable.shifted_pole_count} poles shifted to origin; "
        f"gain rescaled by {model_stable.gain / model_raw.gain:.17g} "
        f"to hold |H| at omega={reference_omega:.17g}"
    )

    return DesignReport(
        spec_lp=lp_spec,
        spec_hp=hp_spec,
        numerator=numerator,
        denominator=denominator,
        model_raw=model_raw,
        model_stable=model_stable,
        denominator_min=denominator_min,
        notes=tuple(notes),
    )


def to_ba(model: PoleZeroModel) -> tuple[np.ndarray, np.ndarray]:
    """Expanded transfer-function coefficients (descending powers of z).

    ``b`` carries the gain; ``a`` is monic, so a[0] == 1.  Expansion from
    roots is well conditioned only up to moderate order (~30); beyond that
    the coefficient form loses accuracy that the root form retains.
    """
    def expand(points: np.ndarray) -> np.ndarray:
        coeffs = np.array([1.0 + 0.0j])
        for r in points:
            coeffs = np.convolve(coeffs, np.array([1.0, -r]))
        return coeffs

    b = model.gain * expand(model.zeros.expand())
    a = expand(model.poles.expand())
    # Conjugate closure makes both polynomials real up to rounding.
    return b.real.copy(), a.real.copy()


def model_to_json_dict(model: PoleZeroModel) -> dict:
    return {
        "zeros": [[z.real, z.imag] for z in model.zeros.expand()],
        "poles": [[p.real, p.imag] for p in model.poles.expand()],
        "gain": model.gain,
        "stabilized": model.stabilized,
    }


def model_from_json_dict(data: dict) -> PoleZeroModel:
    try:
        zeros = ZeroSet.from_points(complex(re, im) for re, im in data["zeros"])
        poles = ZeroSet.from_points(complex(re, im) for re, im in data["poles"])
        gain = float(data["gain"])
        stabilized = bool(data["stabilized"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed pole-zero model: {exc}") from exc
    # The wire schema does not carry the shift count; a loaded model reports 0.
    return PoleZeroModel(zeros, poles, gain, stabilized=stabilized, shifted_pole_count=0)


def _prototype_dict(proto: FirPrototype) -> dict:
    return {
        "series": {
            "coeffs": list(proto.series.coeffs),
            "domain_max": proto.series.domain_max,
        },
        "power_coeffs": list(proto.power_coeffs),
    }


def report_to_json_dict(report: DesignReport) -> dict:
    from .bandspec import spec_to_json_dict

    raw = model_to_json_dict(report.model_raw)
    raw["shifted_pole_count"] = report.model_raw.shifted_pole_count
    stable = model_to_json_dict(report.model_stable)
    stable["shifted_pole_count"] = report.model_stable.shifted_pole_count
    return {
        "spec_lp": spec_to_json_dict(report.spec_lp),
        "spec_hp": spec_to_json_dict(report.spec_hp),
        "numerator": _prototype_dict(report.numerator),
        "denominator": _prototype_dict(report.denominator),
        "model_raw": raw,
        "model_stable": stable,
        "denominator_min": report.denominator_min,
        "notes": list(report.notes),
    }
