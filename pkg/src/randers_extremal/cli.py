"""Command line front end.

    randers-extremal check   JOB   # generalized Berwald test at the job's points
    randers-extremal connect JOB   # extremal connection at the job's points
    randers-extremal verify  JOB   # oracle cross-validation + parallel transport

Reports go to stdout as JSON, diagnostics to stderr. Exit status: 0 pass,
1 mathematical failure (not generalized Berwald, failed validation), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .connection import (
    NotGeneralizedBerwaldError,
    extremal_connection,
    global_solvability,
)
from .expr import ExpressionError
from .geometry import GeometryError
from .jobs import JobError, JobSpec, load_job
from .oracle import cross_validate, solve_point
from .torsion import layout
from .transport import TransportError, parallel_transport

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _floats(a) -> list:
    return np.asarray(a, dtype=float).tolist()


def cmd_check(job: JobSpec) -> tuple[dict, int]:
    if not job.points:
        raise JobError("check needs at least one point")
    rep = global_solvability(job.spec, job.points, job.options.tol)
    out = {
        "command": "check",
        "dimension": job.dimension,
        "tolerance": job.options.tol,
        "points": [
            {
                "point": rep.points[k],
                "C_n": _floats(rep.C_n_row[k]),
                "norm_beta_sq": rep.norm_beta_sq[k],
                "grad_norm_beta_sq": _floats(rep.grad_norm_beta_sq[k]),
                "solvable": rep.is_solvable_pointwise[k],
            }
            for k in range(len(rep.points))
        ],
        "tests_agree": rep.tests_agree,
        "max_violation": rep.max_violation,
        "verdict": rep.verdict,
    }
    return out, EXIT_OK if rep.verdict else EXIT_FAIL


def _rng(job: JobSpec) -> np.random.Generator:
    return np.random.default_rng(job.options.seed)


def cmd_connect(job: JobSpec) -> tuple[dict, int]:
    if not job.points:
        raise JobError("connect needs at least one point")
    opts = job.options
    rng = _rng(job)
    slots = layout(job.dimension)
    points = []
    all_ok = True
    for p in job.points:
        res = extremal_connection(job.spec, p, strict=opts.strict, tol=opts.tol)
        space = solve_point(res.adapted, rng, opts.samples, opts.svd_cutoff)
        all_ok = all_ok and res.compatible
        points.append(
            {
                "point": _floats(p),
                "compatible": res.compatible,
                "frame": _floats(res.frame.B),
                "beta_n_bar": res.frame.beta_n_bar,
                "torsion_adapted": _floats(res.torsion_adapted.components),
                "torsion_chart": _floats(res.torsion_chart.components),
                "torsion_norm": res.torsion_adapted.norm(),
                "gamma": _floats(res.coefficients.gamma),
                "levi_civita": _floats(res.coefficients.levi_civita),
                "affine_dimension": space.affine_dimension,
            }
        )
    out = {
        "command": "connect",
        "dimension": job.dimension,
        "layout": [{"slot": s.label, "kind": s.kind.value} for s in slots],
        "points": points,
    }
    return out, EXIT_OK if all_ok else EXIT_FAIL


def cmd_verify(job: JobSpec) -> tuple[dict, int]:
    if not job.points and not job.curves:
        raise JobError("verify needs points or curves")
    opts = job.options
    rng = _rng(job)
    ok = True
    points = []
    for p in job.points:
        res = extremal_connection(job.spec, p, strict=opts.strict, tol=opts.tol)
        entry = {"point": _floats(p), "compatible": res.compatible}
        for mode, data, T in (
            ("adapted", res.adapted, res.torsion_adapted),
            ("chart", res.data, res.torsion_chart),
        ):
            space = solve_point(data, rng, opts.samples, opts.svd_cutoff)
            cv = cross_validate(T, space)
            entry[mode] = {
                "difference": cv.difference,
                "null_projection": cv.null_projection,
                "closed_form_residual": cv.closed_form_residual,
                "oracle_residual": space.residual,
                "affine_dimension": space.affine_dimension,
                "passed": cv.passed,
            }
            ok = ok and cv.passed
        points.append(entry)
    curves = []
    for k, cj in enumerate(job.curves):
        steps = cj.steps or opts.steps
        tr = parallel_transport(job.spec, cj.curve, cj.x0, steps, strict=opts.strict, tol=opts.tol)
        passed = bool(tr.F_drift <= opts.drift_tol and tr.alpha_drift <= opts.drift_tol)
        ok = ok and passed
        curves.append(
            {
                "curve": k,
                "steps": steps,
                "X_final": _floats(tr.X[-1]),
                "F_drift": tr.F_drift,
                "alpha_drift": tr.alpha_drift,
                "passed": passed,
            }
        )
    out = {"command": "verify", "dimension": job.dimension, "points": points, "curves": curves, "passed": ok}
    return out, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"check": cmd_check, "connect": cmd_connect, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randers-extremal",
        description="Generalized Berwald test and extremal compatible connection of Randers metrics.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("job", help="job file (JSON)")
    parser.add_argument("--tol", type=float, help="solvability tolerance (default 1e-8)")
    parser.add_argument("--samples", type=int, help="random sample vectors per point (default 4n)")
    parser.add_argument("--permissive", action="store_true", help="compute the formulas even where unsolvable")
    parser.add_argument("--seed", type=int, help="seed for sampled tangent vectors (default 0)")
    parser.add_argument("--steps", type=int, help="RK4 steps per curve (default 1000)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = load_job(args.job).with_options(
            tol=args.tol,
            samples=args.samples,
            seed=args.seed,
            steps=args.steps,
            strict=False if args.permissive else None,
        )
        report, code = COMMANDS[args.command](job)
    except (JobError, GeometryError, ExpressionError, TransportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotGeneralizedBerwaldError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
