"""Job files: one JSON document describing a metric, points, curves and options.

Example::

    {
      "dimension": 2,
      "alpha": [["1", "0"], ["1"]],
      "beta": ["0.3*cos(0.7*x1)", "0.3*sin(0.7*x1)"],
      "points": [[0, 0], [0.4, -0.2]],
      "curves": [{"coords": ["t", "0"], "x0": [1, 0]}],
      "options": {"tol": 1e-8, "seed": 0, "steps": 1000, "strict": true}
    }

``alpha`` may be the full symmetric matrix or its upper triangle row by row.
A curve is either ``"coords"`` (one expression in ``t`` per coordinate) or
``"segments"`` (a list of such lists, each used on an equal share of [0, 1]).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .expr import ExpressionError
from .geometry import RandersMetricSpec
from .transport import Curve


class JobError(ValueError):
    """Malformed job file."""


@dataclass(frozen=True)
class Options:
    tol: float = 1e-8
    samples: Optional[int] = None  # random sample vectors per point; default 4n
    strict: bool = True
    seed: int = 0
    steps: int = 1000
    svd_cutoff: float = 1e-9
    drift_tol: float = 1e-6


@dataclass(frozen=True)
class CurveJob:
    curve: Curve
    x0: np.ndarray
    steps: Optional[int] = None


@dataclass(frozen=True)
class JobSpec:
    dimension: int
    spec: RandersMetricSpec
    points: list = field(default_factory=list)
    curves: list = field(default_factory=list)
    options: Options = Options()

    def with_options(self, **overrides) -> "JobSpec":
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, options=replace(self.options, **overrides))


def _vector(obj, n: int, what: str) -> np.ndarray:
    try:
        v = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise JobError(f"{what} must be a list of numbers") from None
    if v.shape != (n,) or not np.all(np.isfinite(v)):
        raise JobError(f"{what} must be {n} finite numbers")
    return v


def job_from_dict(doc: dict) -> JobSpec:
    if not isinstance(doc, dict):
        raise JobError("job must be a JSON object")
    unknown = set(doc) - {"dimension", "alpha", "beta", "points", "curves", "options"}
    if unknown:
        raise JobError(f"unknown job keys: {sorted(unknown)}")
    try:
        n = int(doc["dimension"])
        alpha, beta = doc["alpha"], doc["beta"]
    except KeyError as exc:
        raise JobError(f"missing key {exc.args[0]!r}") from None
    if n < 2:
        raise JobError("dimension must be at least 2")
    if not isinstance(beta, list) or len(beta) != n:
        raise JobError(f"beta must list {n} expressions")
    try:
        spec = RandersMetricSpec.from_strings(alpha, beta)
    except ExpressionError as exc:
        raise JobError(f"bad metric expression: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise JobError(str(exc)) from None

    points = [_vector(p, n, f"points[{k}]") for k, p in enumerate(doc.get("points", []))]

    curves = []
    for k, c in enumerate(doc.get("curves", [])):
        if not isinstance(c, dict) or "x0" not in c:
            raise JobError(f"curves[{k}] needs 'x0' and 'coords' or 'segments'")
        try:
            curve = Curve.from_strings(c.get("coords"), c.get("segments"))
        except ExpressionError as exc:
            raise JobError(f"curves[{k}]: {exc}") from None
        except (TypeError, ValueError) as exc:
            raise JobError(f"curves[{k}]: {exc}") from None
        if curve.n != n:
            raise JobError(f"curves[{k}] has {curve.n} coordinates, expected {n}")
        x0 = _vector(c["x0"], n, f"curves[{k}].x0")
        if not np.any(x0):
            raise JobError(f"curves[{k}].x0 must be nonzero")
        steps = c.get("steps")
        curves.append(CurveJob(curve, x0, None if steps is None else int(steps)))

    opts = doc.get("options", {})
    names = {f.name for f in fields(Options)}
    if not isinstance(opts, dict) or set(opts) - names:
        raise JobError(f"options may only contain {sorted(names)}")
    values = {}
    for key, value in opts.items():
        cast = _OPTION_TYPES[key]
        if value is None and key == "samples":
            values[key] = None
            continue
        if cast is bool:
            if not isinstance(value, bool):
                raise JobError(f"option {key!r} must be true or false")
            values[key] = value
            continue
        try:
            values[key] = cast(value)
        except (TypeError, ValueError):
            raise JobError(f"option {key!r} must be a number") from None
    options = Options(**values)
    if options.tol <= 0 or options.svd_cutoff <= 0 or options.drift_tol <= 0:
        raise JobError("tolerances must be positive")
    if options.steps < 1 or (options.samples is not None and options.samples < 0):
        raise JobError("steps must be positive and samples non-negative")
    return JobSpec(n, spec, points, curves, options)


_OPTION_TYPES = {
    "tol": float,
    "samples": int,
    "strict": bool,
    "seed": int,
    "steps": int,
    "svd_cutoff": float,
    "drift_tol": float,
}


def load_job(path: str | Path) -> JobSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise JobError(f"cannot read job file: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError(f"invalid JSON: {exc}") from None
    return job_from_dict(doc)
