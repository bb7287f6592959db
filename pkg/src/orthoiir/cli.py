"""Command-line front end: run a design from a JSON config, export results."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bandspec import (
    Band,
    FilterSpec,
    build_object_function,
    hp_lp_complement,
    omega_to_x,
    spec_from_json_dict,
    spec_to_json_dict,
)
from .iir import (
    DesignReport,
    PipelineError,
    design,
    model_from_json_dict,
    model_to_json_dict,
    report_to_json_dict,
    to_ba,
)
from .jsonio import dumps_canonical
from .legendre import eval_series
from .response import curve_to_csv, sweep
from .jsonio import fmt_float

__all__ = ["DesignConfig", "load_config", "cmd_design", "cmd_respond", "main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PIPELINE = 3
EXIT_IO = 4

OUTPUT_DIR_ENV = "ORTHOIIR_OUTPUT_DIR"


@dataclass(frozen=True)
class DesignConfig:
    lp_spec: FilterSpec
    hp_levels: tuple[float, float]
    num_terms_n: int
    num_terms_m: int
    kind: str
    grid_points: int
    reference_omega: float
    output_dir: Path

    def __post_init__(self):
        if self.num_terms_n < 1 or self.num_terms_m < 1:
            raise ValueError("num_terms_n and num_terms_m must be positive")
        if self.grid_points < 16:
            raise ValueError("grid_points must be at least 16")
        if self.kind not in ("low_pass", "high_pass"):
            raise ValueError(f"kind must be 'low_pass' or 'high_pass', got {self.kind!r}")
        if not 0.0 <= self.reference_omega <= math.pi:
            raise ValueError("reference_omega must lie in [0, pi]")


def _lp_spec_from_config(data: dict) -> FilterSpec:
    if "lp_spec" in data:
        return spec_from_json_dict(data["lp_spec"])
    try:
        pass_edge = float(data["passband_edge"])
        stop_edge = float(data["stopband_edge"])
        pass_level = float(data["passband_level"])
        stop_level = float(data["stopband_level"])
    except KeyError as exc:
        raise ValueError(
            "config needs either 'lp_spec' or the band-edge shorthand "
            "(passband_edge, stopband_edge, passband_level, stopband_level)"
        ) from exc
    return FilterSpec(
        (
            Band(0.0, pass_edge, pass_level),
            Band(stop_edge, math.pi, stop_level),
        )
    )


def load_config(path: Path) -> DesignConfig:
    """Parse and validate a design configuration file."""
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("config root must be a JSON object")
    lp = _lp_spec_from_config(data)
    try:
        lo, hi = (float(v) for v in data["hp_levels"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("config needs 'hp_levels': [lo_level, hi_level]") from exc
    output_dir = os.environ.get(OUTPUT_DIR_ENV) or data.get("output_dir", ".")
    return DesignConfig(
        lp_spec=lp,
        hp_levels=(lo, hi),
        num_terms_n=int(data.get("num_terms_n", 20)),
        num_terms_m=int(data.get("num_terms_m", 20)),
        kind=str(data.get("kind", "low_pass")),
        grid_points=int(data.get("grid_points", 2048)),
        reference_omega=float(data.get("reference_omega", 0.0)),
        output_dir=Path(output_dir),
    )


def _object_function_csv(spec: FilterSpec, report_series, n_points: int = 512) -> str:
    """Sampled ideal object function next to its truncated-series fit."""
    obj = build_object_function(spec)
    xs = np.linspace(0.0, spec.x0, n_points)
    ideal = obj.eval(xs)
    fitted = eval_series(report_series, xs)
    lines = ["x,object_fn,series_fit"]
    for x, f, g in zip(xs, ideal, fitted):
        lines.append(f"{fmt_float(x)},{fmt_float(f)},{fmt_float(g)}")
    return "\n".join(lines) + "\n"


def _write_outputs(config: DesignConfig, report: DesignReport, quiet: bool) -> None:
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)

    curve_stable = sweep(report.model_stable, config.grid_points)
    curve_raw = sweep(report.model_raw, config.grid_points)
    b, a = to_ba(report.model_stable)

    files = {
        "report.json": dumps_canonical(report_to_json_dict(report)),
        "model.json": dumps_canonical(model_to_json_dict(report.model_stable)),
        "ba_coeffs.json": dumps_canonical(
            {"b": [float(v) for v in b], "a": [float(v) for v in a]}
        ),
        "response.csv": curve_to_csv(curve_stable),
        "response_raw.csv": curve_to_csv(curve_raw),
        "objfn_num.csv": _object_function_csv(report.spec_lp, report.numerator.series),
        "objfn_den.csv": _object_function_csv(report.spec_hp, report.denominator.series),
    }
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
        if not quiet:
            print(f"wrote {out / name}")


def cmd_design(args: argparse.Namespace) -> int:
    try:
        config = load_config(Path(args.config))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.check:
        if not args.quiet:
            print("config ok")
        return EXIT_OK

    try:
        if not args.quiet:
            print(f"designing {config.kind} filter: N={config.num_terms_n}, M={config.num_terms_m}")
        try:
            hp_spec = hp_lp_complement(config.lp_spec, *config.hp_levels)
        except ValueError as exc:
            raise PipelineError("hp-complement", str(exc)) from exc
        report = design(
            config.lp_spec,
            hp_spec,
            config.num_terms_n,
            config.num_terms_m,
            config.kind,
            reference_omega=config.reference_omega,
        )
    except PipelineError as exc:
        print(f"pipeline error {exc}", file=sys.stderr)
        return EXIT_PIPELINE

    try:
        _write_outputs(config, report, args.quiet)
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO

    if not args.quiet:
        for note in report.notes:
            print(f"note: {note}")
    return EXIT_OK


def cmd_respond(args: argparse.Namespace) -> int:
    try:
        with open(args.model, "r", encoding="utf-8") as handle:
            model = model_from_json_dict(json.load(handle))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        curve = sweep(model, args.points)
    except ValueError as exc:
        print(f"pipeline error [respond] {exc}", file=sys.stderr)
        return EXIT_PIPELINE

    try:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(curve_to_csv(curve), encoding="utf-8")
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    if not args.quiet:
        print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthoiir",
        description="Design approximately-linear-phase IIR filters from band specs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="run the design pipeline from a JSON config")
    p_design.add_argument("config", help="path to the design configuration JSON")
    p_design.add_argument("--check", action="store_true", help="validate the config and exit")
    p_design.add_argument("--quiet", action="store_true", help="suppress progress lines")
    p_design.set_defaults(func=cmd_design)

    p_respond = sub.add_parser("respond", help="re-sweep a saved pole-zero model")
    p_respond.add_argument("model", help="path to model.json")
    p_respond.add_argument("--points", type=int, default=2048, help="grid points over [0, pi]")
    p_respond.add_argument("--out", required=True, help="output CSV path")
    p_respond.add_argument("--quiet", action="store_true", help="suppress progress lines")
    p_respond.set_defaults(func=cmd_respond)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
