"""Approximately-linear-phase IIR filter design via Legendre least-squares prototypes.

A filter is specified as a piecewise-constant magnitude over [0, pi],
re-expressed as an object function of x = cos(omega/2), approximated by a
truncated even-order Legendre series, and realized as a ratio of two such
prototypes.  Poles that land outside the unit circle are shifted to the
origin, trading a small response change for guaranteed stability.
"""

from .bandspec import (
    Band,
    FilterSpec,
    ObjectFunction,
    build_object_function,
    hp_lp_complement,
    omega_to_x,
    x_to_omega,
)
from .fir import (
    FirPrototype,
    ZeroSet,
    eval_fir_response,
    find_x_roots,
    fir_zero_set,
    synthesize_fir,
    x_roots_to_z_zeros,
)
from .iir import (
    DesignReport,
    PipelineError,
    PoleZeroModel,
    assemble_iir,
    design,
    model_from_json_dict,
    model_to_json_dict,
    stabilize,
    to_ba,
)
from .legendre import (
    LegendreSeries,
    eval_legendre,
    eval_series,
    integrated_squared_error,
    project,
)
from .numerics import QuadratureRule, gauss_legendre, poly_roots
from .response import ResponseCurve, curve_to_csv, curve_to_json_dict, eval_model, sweep

__version__ = "0.1.0"

__all__ = [
    "Band",
    "FilterSpec",
    "ObjectFunction",
    "build_object_function",
    "hp_lp_complement",
    "omega_to_x",
    "x_to_omega",
    "FirPrototype",
    "ZeroSet",
    "synthesize_fir",
    "eval_fir_response",
    "find_x_roots",
    "x_roots_to_z_zeros",
    "fir_zero_set",
    "PoleZeroModel",
    "DesignReport",
    "PipelineError",
    "assemble_iir",
    "stabilize",
    "design",
    "to_ba",
    "model_to_json_dict",
    "model_from_json_dict",
    "LegendreSeries",
    "eval_legendre",
    "project",
    "eval_series",
    "integrated_squared_error",
    "QuadratureRule",
    "gauss_legendre",
    "poly_roots",
    "ResponseCurve",
    "eval_model",
    "sweep",
    "curve_to_csv",
    "curve_to_json_dict",
    "__version__",
]
