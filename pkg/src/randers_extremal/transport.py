"""Parallel transport along curves with the extremal connection field."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .connection import SOLVABILITY_TOL, extremal_connection, levi_civita_connection
from .expr import eval_with_time_derivative, parse
from .geometry import GeometryError, RandersMetricSpec, alpha_length, finsler_value


class TransportError(RuntimeError):
    pass


@dataclass(frozen=True)
class Curve:
    """Curve ``c: [0, 1] -> M`` made of equal-length smooth pieces.

    ``segments[s]`` holds the coordinate expressions (in ``t``) used on
    ``[s/m, (s+1)/m]``; a smooth curve has a single segment.
    """

    n: int
    segments: tuple

    @classmethod
    def from_strings(cls, coords: Sequence[str] | None = None, segments=None) -> "Curve":
        if (coords is None) == (segments is None):
            raise ValueError("give either coords or segments")
        pieces = [coords] if segments is None else segments
        n = len(pieces[0])
        parsed = []
        for piece in pieces:
            if len(piece) != n:
                raise ValueError("all segments need the same number of coordinates")
            parsed.append(tuple(parse(str(src), 0, allow_t=True) for src in piece))
        return cls(n, tuple(parsed))

    def _piece(self, segment: int) -> tuple:
        return self.segments[segment]

    def point(self, t: float, segment: int | None = None) -> np.ndarray:
        seg = self._segment_of(t) if segment is None else segment
        return np.array([e(t=t) for e in self._piece(seg)])

    def velocity(self, t: float, segment: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        seg = self._segment_of(t) if segment is None else segment
        vals = [eval_with_time_derivative(e, t) for e in self._piece(seg)]
        return np.array([v for v, _ in vals]), np.array([d for _, d in vals])

    def _segment_of(self, t: float) -> int:
        m = len(self.segments)
        return min(int(t * m), m - 1)

    def closure_gap(self) -> float:
        return float(np.linalg.norm(self.point(1.0, len(self.segments) - 1) - self.point(0.0, 0)))


@dataclass(frozen=True)
class TransportResult:
    t: np.ndarray
    X: np.ndarray  # X[k] is the transported vector at t[k]
    F_drift: float
    alpha_drift: float
    step_size: float

    @property
    def trajectory(self):
        return list(zip(self.t, self.X))


def connection_field(
    spec: RandersMetricSpec,
    x: np.ndarray,
    levi_civita: bool = False,
    strict: bool = True,
    tol: float = SOLVABILITY_TOL,
) -> np.ndarray:
    """``Gamma[k, i, j]`` of the extremal (or Levi-Civita) connection at ``x``."""
    if levi_civita:
        return levi_civita_connection(spec, x).gamma
    return extremal_connection(spec, x, strict=strict, tol=tol).coefficients.gamma


def parallel_transport(
    spec: RandersMetricSpec,
    curve: Curve,
    X0: Sequence[float],
    steps: int,
    levi_civita: bool = False,
    strict: bool = True,
    tol: float = SOLVABILITY_TOL,
) -> TransportResult:
    """Integrate ``X^k' = -c^i' X^j Gamma^k_ij(c)`` with classical RK4 on a uniform grid.

    The connection is rebuilt at every distinct stage point. ``levi_civita=True`` forces zero
    torsion (negative control: preserves alpha, not F unless beta is parallel).
    """
    X0 = np.asarray(X0, dtype=float)
    if X0.shape != (spec.n,) or curve.n != spec.n:
        raise ValueError("dimension mismatch between metric, curve and initial vector")
    if not np.any(X0):
        raise ValueError("initial vector must be nonzero")
    if steps < 1:
        raise ValueError("steps must be positive")
    m = len(curve.segments)
    if steps % m:
        raise ValueError(f"steps must be a multiple of the {m} curve segments")
    per_seg = steps // m
    h = 1.0 / steps

    cache: dict = {}

    def field_at(t, seg):
        # stages 2/3 share a point, as do stage 4 and the next step's stage 1
        key = (seg, t)
        if key not in cache:
            c, dc = curve.velocity(t, seg)
            try:
                gamma = connection_field(spec, c, levi_civita, strict, tol)
            except GeometryError as exc:
                raise TransportError(
                    f"curve leaves the metric's validity region at t={t:.6g}: {exc}"
                ) from exc
            if len(cache) > 8:
                cache.clear()
            cache[key] = np.einsum("i,kij->kj", dc, gamma)
        return cache[key]

    def rhs(t, X, seg):
        return -field_at(t, seg) @ X

    ts = np.empty(steps + 1)
    Xs = np.empty((steps + 1, spec.n))
    ts[0], Xs[0] = 0.0, X0
    X = X0.copy()
    for k in range(steps):
        seg = k // per_seg
        t0, tm, t1 = k * h, (k + 0.5) * h, (k + 1) * h
        k1 = rhs(t0, X, seg)
        k2 = rhs(tm, X + 0.5 * h * k1, seg)
        k3 = rhs(tm, X + 0.5 * h * k2, seg)
        k4 = rhs(t1, X + h * k3, seg)
        X = X + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ts[k + 1] = t1
        Xs[k + 1] = X

    F_vals = np.empty(steps + 1)
    a_vals = np.empty(steps + 1)
    for k in range(steps + 1):
        seg = min(k // per_seg, m - 1) if k < steps else m - 1
        c = curve.point(ts[k], seg)
        F_vals[k] = finsler_value(spec, c, Xs[k])
        a_vals[k] = alpha_length(spec, c, Xs[k])
    F_drift = float(np.max(np.abs(F_vals - F_vals[0])) / F_vals[0])
    alpha_drift = float(np.max(np.abs(a_vals - a_vals[0])) / a_vals[0])
    return TransportResult(ts, Xs, F_drift, alpha_drift, h)


def holonomy_defect(
    spec: RandersMetricSpec,
    loop: Curve,
    X0: Sequence[float],
    steps: int,
    **kwargs,
) -> tuple[np.ndarray, float]:
    """Transport around a closed curve; returns the final vector and the F drift."""
    if loop.closure_gap() > 1e-10:
        raise ValueError(f"curve does not close (gap {loop.closure_gap():.3g})")
    res = parallel_transport(spec, loop, X0, steps, **kwargs)
    return res.X[-1], res.F_drift


def unit_square_loop(origin: Sequence[float] = (0.0, 0.0), side: float = 1.0) -> Curve:
    """Counter-clockwise square in the ``x1 x2`` plane as four straight segments."""
    x, y = (float(v) for v in origin)
    s = float(side)
    L = lambda v0, dv, k: f"{v0!r} + {dv!r}*(4*t - {k})"  # noqa: E731
    return Curve.from_strings(
        segments=[
            [L(x, s, 0), repr(y)],
            [repr(x + s), L(y, s, 1)],
            [L(x + s, -s, 2), repr(y + s)],
            [repr(x), L(y + s, -s, 3)],
        ]
    )
