"""Solvability and the closed-form extremal compatible connection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .frame import AdaptedFrame, AdaptedPointData, adapted_frame, to_adapted, torsion_to_chart
from .geometry import PointFrameData, RandersMetricSpec, dual_vector, norm_sq_gradient, point_data
from .torsion import SlotKind, TorsionTensor, layout, slot_index, unknown_count

SOLVABILITY_TOL = 1e-8


class NotGeneralizedBerwaldError(ArithmeticError):
    """The compatibility equations have no solution at the point."""


@dataclass(frozen=True)
class ConnectionCoefficients:
    n: int
    gamma: np.ndarray  # gamma[r, i, j] = Gamma^r_ij, chart coordinates
    torsion_chart: TorsionTensor
    levi_civita: np.ndarray


@dataclass
class SolvabilityReport:
    points: list
    is_solvable_pointwise: list
    C_n_row: list
    norm_beta_sq: list
    grad_norm_beta_sq: list
    verdict: bool
    max_violation: float
    tests_agree: bool
    c_violation: list = field(default_factory=list)


def _scale(data: PointFrameData, adapted: AdaptedPointData) -> float:
    return 1.0 + np.abs(data.christoffel).max() + np.abs(data.dbeta).max() / adapted.beta_n


def solvability_conditions(adapted: AdaptedPointData) -> np.ndarray:
    """``(C_{n;1}, ..., C_{n;n})``; all zero iff the point is solvable."""
    return adapted.C[adapted.n - 1].copy()


def _c_test(data, adapted, tol):
    c_row = solvability_conditions(adapted)
    violation = float(np.abs(c_row).max()) / _scale(data, adapted)
    return c_row, violation, bool(violation <= tol)


def global_solvability(
    spec: RandersMetricSpec, sample_points: Sequence[Sequence[float]], tol: float = SOLVABILITY_TOL
) -> SolvabilityReport:
    """Check the generalized Berwald property on sampled points.

    Two routes are evaluated at every point: the adapted-frame conditions
    ``C_{n;i} = 0`` and the chart-coordinate gradient of ``||beta#||^2``.
    They are tied by ``B^T grad = -2 beta_n^2 C_{n;.}``, which is checked
    as well (``tests_agree``).
    """
    if len(sample_points) == 0:
        raise ValueError("no sample points")
    report = SolvabilityReport([], [], [], [], [], True, 0.0, True)
    for p in sample_points:
        data = point_data(spec, p)
        frame = adapted_frame(data)
        adapted = to_adapted(data, frame)
        c_row, c_violation, c_ok = _c_test(data, adapted, tol)
        grad = norm_sq_gradient(data)
        _, nsq = dual_vector(data)
        scale = _scale(data, adapted)
        grad_ok = bool(np.abs(grad).max() <= tol * scale)
        predicted = -2.0 * adapted.beta_n**2 * c_row
        identity_gap = float(np.abs(frame.B.T @ grad - predicted).max())
        agree = bool(identity_gap <= 1e-8 * scale * (1.0 + np.abs(grad).max()))
        report.points.append([float(v) for v in p])
        report.is_solvable_pointwise.append(bool(c_ok and grad_ok))
        report.C_n_row.append(c_row)
        report.c_violation.append(c_violation)
        report.norm_beta_sq.append(nsq)
        report.grad_norm_beta_sq.append(grad)
        report.max_violation = max(report.max_violation, float(np.abs(grad).max()))
        report.tests_agree = report.tests_agree and agree
        report.verdict = bool(report.verdict and c_ok and grad_ok and nsq > 0)
    return report


def extremal_torsion(
    adapted: AdaptedPointData, strict: bool = True, tol: float = SOLVABILITY_TOL
) -> TorsionTensor:
    """Torsion of the extremal connection in the adapted frame.

    * front short blocks: 0
    * front tails ``T_ab^n = (d_a beta_b - d_b beta_a) / beta_n``
    * rear diagonals ``T_an^a = C_{a;a}``, rear tails ``T_an^n = C_{a;n}``
    * rear off-diagonals ``T_an^c = S_ac / 2``

    The formulas make sense at every point; where ``C_{n;i} != 0`` they do
    not give a compatible connection. ``strict`` raises there, otherwise the
    result carries ``compatible=False``.
    """
    n = adapted.n
    last = n - 1
    C, S, db, bn = adapted.C, adapted.S, adapted.dbeta_bar, adapted.beta_n
    c_row = C[last]
    scale = 1.0 + np.abs(adapted.gamma_bar).max() + np.abs(db).max() / bn
    ok = bool(np.abs(c_row).max() / scale <= tol)
    if strict and not ok:
        raise NotGeneralizedBerwaldError(
            f"compatibility equations unsolvable: max |C_n;i| = {np.abs(c_row).max():.3g}"
        )
    comp = np.zeros(unknown_count(n))
    for k, s in enumerate(layout(n)):
        if s.kind is SlotKind.FRONT_TAIL:
            comp[k] = (db[s.a, s.b] - db[s.b, s.a]) / bn
        elif s.kind is SlotKind.REAR_DIAGONAL:
            comp[k] = C[s.a, s.a]
        elif s.kind is SlotKind.REAR_TAIL:
            comp[k] = C[s.a, last]
        elif s.kind is SlotKind.REAR_OFFDIAGONAL:
            comp[k] = 0.5 * S[s.a, s.c]
    return TorsionTensor(n, comp, compatible=ok)


def connection_coefficients(data: PointFrameData, torsion_chart: TorsionTensor) -> ConnectionCoefficients:
    """Metric connection of ``alpha`` with the given torsion (Christoffel process).

    ``Gamma^r_ij = Gamma*^r_ij - 1/2 (T^l_jk a^kr a_il + T^l_ik a^kr a_jl - T^r_ij)``
    """
    if torsion_chart.n != data.n:
        raise ValueError(f"torsion has dimension {torsion_chart.n}, point data {data.n}")
    a, ainv = data.alpha_at_p, data.alpha_inv
    T = torsion_chart.to_full()
    t1 = np.einsum("ljk,kr,il->rij", T, ainv, a)
    t2 = np.einsum("lik,kr,jl->rij", T, ainv, a)
    gamma = data.christoffel - 0.5 * (t1 + t2 - T)
    return ConnectionCoefficients(data.n, gamma, torsion_chart, data.christoffel)


def randers_sigma(n: int, y: Sequence[float]) -> np.ndarray:
    """Coefficients ``sigma[slot, i]`` of the Randers compatibility equations.

    ``sigma_{ab;i}^c = (d_i^c y^a + d_i^a y^c) d_b^n + (d_i^b y^a - d_i^a y^b) d_c^n``
    in the adapted frame, one row per layout slot.
    """
    y = np.asarray(y, dtype=float)
    last = n - 1
    sig = np.zeros((unknown_count(n), n))
    for k, s in enumerate(layout(n)):
        a, b, c = s.a, s.b, s.c
        if b == last:
            sig[k, c] += y[a]
            sig[k, a] += y[c]
        if c == last:
            sig[k, b] += y[a]
            sig[k, a] -= y[b]
    return sig


def kappa_coefficients(T: TorsionTensor, i: int) -> np.ndarray:
    """Coefficients of ``y^k`` in the ``i``-th compatibility equation (0-based ``i < n-1``)."""
    n = T.n
    last = n - 1
    if not 0 <= i < last:
        raise ValueError("kappa is defined for the first n-1 equations only")
    kappa = np.zeros(n)
    for k in range(last):
        if k < i:
            kappa[k] = T.get(k, i, last) + T.get(i, last, k) + T.get(k, last, i)
        elif k == i:
            kappa[k] = 2.0 * T.get(i, last, i)
        else:
            kappa[k] = -T.get(i, k, last) + T.get(i, last, k) + T.get(k, last, i)
    return kappa


@dataclass(frozen=True)
class ExtremalConnection:
    """Everything the pipeline produces at one point."""

    data: PointFrameData
    frame: AdaptedFrame
    adapted: AdaptedPointData
    torsion_adapted: TorsionTensor
    torsion_chart: TorsionTensor
    coefficients: ConnectionCoefficients

    @property
    def compatible(self) -> bool:
        return bool(self.torsion_adapted.compatible)


def extremal_connection(
    spec: RandersMetricSpec,
    p: Sequence[float],
    strict: bool = True,
    tol: float = SOLVABILITY_TOL,
    frame: AdaptedFrame | None = None,
) -> ExtremalConnection:
    """point data -> adapted frame -> closed-form torsion -> chart -> coefficients."""
    data = point_data(spec, p)
    frame = adapted_frame(data) if frame is None else frame
    adapted = to_adapted(data, frame)
    T_bar = extremal_torsion(adapted, strict=strict, tol=tol)
    T = torsion_to_chart(T_bar, frame)
    return ExtremalConnection(data, frame, adapted, T_bar, T, connection_coefficients(data, T))


def levi_civita_connection(spec: RandersMetricSpec, p: Sequence[float]) -> ConnectionCoefficients:
    data = point_data(spec, p)
    return connection_coefficients(data, TorsionTensor.zeros(spec.n))
