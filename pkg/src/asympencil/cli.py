"""Command-line front end.

    asympencil example p1            # writes p1.obj and p1.csv
    asympencil build  surface.txt --out surface.obj
    asympencil ruled  ruled.txt --report ruled.csv
    asympencil check  surface.txt

Exit status: 0 when every check passes, 2 when a geometric check fails,
3 on configuration or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import examples as fixtures
from . import expr as ex
from .curve import DEFAULT_PROBES, CurveError, FrenetUndefined, constant, curve_from_definition, read_definition
from .export import ExportError, diagnostics, export_csv, export_obj
from .frames import DEFAULT_N, FrameError, rmf_by_theta, rmf_double_reflection
from .pencil import (
    ASYM_TOL,
    ISO_TOL,
    ConditionReport,
    MarchingScale,
    PreconditionViolated,
    SurfacePatch,
    build_sufficient,
    check_conditions,
)
from .ruled import RuledPatch, build_ruled, classify
from .verify import normal_curvature_profile

EXIT_OK, EXIT_GEOMETRY, EXIT_CONFIG = 0, 2, 3
KN_TOL = 1e-5
CLOSED_FORM_TOL = 1e-8
MAX_DEGENERATE_PROBES = 2


class ConfigError(ValueError):
    pass


@dataclass
class RunResult:
    patch: SurfacePatch
    report: ConditionReport
    max_normal_curvature: float
    classification: object = None
    closed_form_error: float | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.ok else EXIT_GEOMETRY

    def summary(self) -> list[str]:
        lines = [f"surface: {self.patch.name or 'user patch'}"]
        lines += self.report.lines()
        lines.append(f"max |normal curvature| along t0: {self.max_normal_curvature:.3e}")
        if self.closed_form_error is not None:
            lines.append(f"max deviation from closed form: {self.closed_form_error:.3e}")
        if self.classification is not None:
            c = self.classification
            lines.append(
                f"planar curve: {c.planar_curve}  developable: {c.developable}  plane: {c.plane}"
            )
        return lines


def evaluate_patch(patch, tol_iso=ISO_TOL, tol_asym=ASYM_TOL, reference=None) -> RunResult:
    """Run every check on ``patch``; failures are listed in check order."""
    report = check_conditions(patch, tol_iso, tol_asym)
    kn = normal_curvature_profile(patch)
    result = RunResult(patch, report, kn.max_abs)
    if isinstance(patch, RuledPatch):
        result.classification = classify(patch)
    if reference is not None:
        S, T = patch.parameter_grid()
        result.closed_form_error = float(np.max(np.abs(patch.evaluate(S, T) - reference(S, T))))
    checks = [
        ("isoparametric", report.isoparametric),
        ("asymptotic", report.asymptotic),
        ("degenerate normal", report.degenerate_probes <= MAX_DEGENERATE_PROBES),
        ("normal curvature", not kn.max_abs > KN_TOL),
    ]
    if result.closed_form_error is not None:
        checks.append(("closed form", result.closed_form_error <= CLOSED_FORM_TOL))
    result.failures = [name for name, passed in checks if not passed]
    return result


def run_example(name, ns=200, nt=50, frame_n=DEFAULT_N, tol_iso=ISO_TOL, tol_asym=ASYM_TOL) -> RunResult:
    example = fixtures.get(name)
    patch = example.build(ns, nt, frame_n)
    return evaluate_patch(patch, tol_iso, tol_asym, reference=example.reference)


def _frame_from(entries, curve, frame_n):
    kind = entries.get("frame", "theta")
    if kind == "theta":
        return rmf_by_theta(curve, constant(entries.get("theta0", "0")), frame_n)
    if kind == "reflection":
        if "u0" not in entries:
            raise ConfigError("frame = reflection needs u0 = x, y, z")
        u0 = [constant(part) for part in entries["u0"].split(",")]
        if len(u0) != 3:
            raise ConfigError("u0 needs three components")
        return rmf_double_reflection(curve, u0, frame_n)
    raise ConfigError(f"unknown frame kind {kind!r} (theta or reflection)")


def patch_from_config(path, kind, args) -> SurfacePatch:
    """Build a pencil (``kind='build'``) or ruled (``kind='ruled'``) member from a file."""
    entries = read_definition(path)
    curve = curve_from_definition(entries, args.probes)
    frame_n = args.frame_n or int(constant(entries.get("frame_n", str(DEFAULT_N))))
    ns = args.ns or int(constant(entries.get("ns", "200")))
    nt = args.nt or int(constant(entries.get("nt", "50")))
    for key in ("t_min", "t_max"):
        if key not in entries:
            raise ConfigError(f"missing {key}")
    t_range = (constant(entries["t_min"]), constant(entries["t_max"]))
    t0 = constant(entries.get("t0", "0"))
    frame = _frame_from(entries, curve, frame_n)
    name = Path(path).stem
    if kind == "ruled":
        if "g" not in entries:
            raise ConfigError("ruled surfaces need g = <expr in s>")
        return build_ruled(curve, frame, entries["g"], t0, t_range, ns, nt, name=name)
    if "f" in entries:
        scale = build_sufficient(entries["f"], entries.get("a", "0"), frame, t0, t_range)
    else:
        missing = [k for k in ("b", "c") if k not in entries]
        if missing:
            raise ConfigError(f"missing {', '.join(missing)} (or give f)")
        scale = MarchingScale.from_exprs(entries.get("a", "0"), entries["b"], entries["c"], t0, t_range)
    return SurfacePatch(curve, frame, scale, curve.interval, ns, nt, name)


def write_outputs(result: RunResult, out, report) -> None:
    if out:
        patch = result.patch
        S, T = patch.parameter_grid()
        export_obj(patch.evaluate(S, T), out, params=(S, T))
    if report:
        export_csv(diagnostics(result.patch), report)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="OBJ mesh path")
    common.add_argument("--report", help="diagnostics CSV path")
    common.add_argument("--ns", type=int, help="grid samples along s (default 200)")
    common.add_argument("--nt", type=int, help="grid samples along t (default 50)")
    common.add_argument("--frame-n", type=int, help=f"frame grid steps (default {DEFAULT_N})")
    common.add_argument("--tol-asym", type=float, default=ASYM_TOL)
    common.add_argument("--tol-iso", type=float, default=ISO_TOL)
    common.add_argument(
        "--probes", type=int, default=DEFAULT_PROBES, help="probes for the unit-speed check"
    )
    parser = argparse.ArgumentParser(
        prog="asympencil", description="Surface pencils with a common asymptotic curve."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("example", parents=[common], help="build one of the worked examples")
    p.add_argument("name", choices=sorted(fixtures.EXAMPLES))
    for name, text in (
        ("build", "pencil member from a definition file"),
        ("ruled", "ruled member from a definition file"),
        ("check", "report only, no mesh"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("config")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    for flag in ("ns", "nt"):
        value = getattr(args, flag)
        if value is not None and value < 2:
            print(f"error: --{flag} must be at least 2", file=sys.stderr)
            return EXIT_CONFIG
    try:
        if args.command == "example":
            result = run_example(
                args.name,
                args.ns or 200,
                args.nt or 50,
                args.frame_n or DEFAULT_N,
                args.tol_iso,
                args.tol_asym,
            )
        else:
            path = args.config
            if args.command == "check":
                kind = "ruled" if "g" in read_definition(path) else "build"
            else:
                kind = args.command
            patch = patch_from_config(path, kind, args)
            result = evaluate_patch(patch, args.tol_iso, args.tol_asym)
    except (
        ConfigError,
        CurveError,
        ex.ExprError,
        FrameError,
        FrenetUndefined,
        PreconditionViolated,
        OSError,
        ValueError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    print("\n".join(result.summary()))
    if args.command == "example":
        args.out = args.out or f"{args.name}.obj"
        args.report = args.report or f"{args.name}.csv"
    if args.command != "check" or args.report:
        try:
            write_outputs(result, None if args.command == "check" else args.out, args.report)
        except (ExportError, OSError) as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_GEOMETRY if isinstance(err, ExportError) else EXIT_CONFIG
    if result.failures:
        print(f"FAILED: {result.failures[0]}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
