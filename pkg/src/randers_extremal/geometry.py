"""Randers metrics ``F = alpha + beta`` and their pointwise differential data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .expr import Expression, evaluate, eval_with_gradient, parse

CONVEXITY_MARGIN = 1e-9
SPD_PIVOT_TOL = 1e-12
BETA_ZERO_TOL = 1e-12


class GeometryError(ValueError):
    """The metric is not a valid Randers metric at the queried point."""


class NotPositiveDefiniteError(GeometryError):
    pass


class DegeneratePointError(GeometryError):
    """``beta`` vanishes at the point.

    At such points the indicatrix is quadratic; a compatible connection would
    force the whole (connected) space to be Riemannian, in which case the
    extremal connection is simply the Levi-Civita connection of ``alpha``.
    """


class ConvexityError(GeometryError):
    """``||beta||_alpha >= 1``: F is not strongly convex."""


@dataclass(frozen=True)
class RandersMetricSpec:
    n: int
    alpha: tuple  # n x n tuple of Expression, symmetric
    beta: tuple  # n Expressions

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension must be at least 2")
        if len(self.alpha) != self.n or any(len(row) != self.n for row in self.alpha):
            raise ValueError("alpha must be an n x n matrix of expressions")
        if len(self.beta) != self.n:
            raise ValueError("beta must have n components")
        for i in range(self.n):
            for j in range(i):
                if self.alpha[i][j] != self.alpha[j][i]:
                    raise ValueError(f"alpha is not symmetric at ({i + 1},{j + 1})")
        for e in [e for row in self.alpha for e in row] + list(self.beta):
            if e.dimension != self.n or e.uses_t:
                raise ValueError("metric expressions must be fields over the chart")

    @classmethod
    def from_strings(cls, alpha: Sequence[Sequence[str]], beta: Sequence[str]) -> "RandersMetricSpec":
        """Build from expression strings.

        ``alpha`` is either the full matrix or its upper triangle given row by
        row (row ``i`` holding the entries ``j >= i``).
        """
        n = len(beta)
        if len(alpha) != n:
            raise ValueError(f"alpha has {len(alpha)} rows, beta has {n} entries")
        parsed = [[None] * n for _ in range(n)]
        for i, row in enumerate(alpha):
            if len(row) == n:
                cols = range(n)
            elif len(row) == n - i:
                cols = range(i, n)
            else:
                raise ValueError(f"alpha row {i + 1} has {len(row)} entries")
            for j, src in zip(cols, row):
                e = parse(str(src), n)
                if j >= i:
                    parsed[i][j] = e
                elif e != parsed[j][i]:
                    raise ValueError(f"alpha is not symmetric at ({i + 1},{j + 1})")
        for i in range(n):
            for j in range(i):
                parsed[i][j] = parsed[j][i]
        return cls(n, tuple(tuple(r) for r in parsed), tuple(parse(str(s), n) for s in beta))


@dataclass(frozen=True)
class PointFrameData:
    """Chart-coordinate data at a point.

    ``dalpha[i, j, k] = d alpha_ij / dx^k``, ``dbeta[i, j] = d beta_j / dx^i``
    and ``christoffel[k, i, j]`` is the Levi-Civita symbol of ``alpha`` with
    upper index ``k``.
    """

    point: np.ndarray
    alpha_at_p: np.ndarray
    alpha_inv: np.ndarray
    dalpha: np.ndarray
    beta_at_p: np.ndarray
    dbeta: np.ndarray
    christoffel: np.ndarray

    @property
    def n(self) -> int:
        return len(self.point)


def _check_spd(a: np.ndarray) -> None:
    try:
        L = np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError("alpha is not positive definite") from None
    pivots = np.diag(L) ** 2
    if pivots.min() <= SPD_PIVOT_TOL * max(1.0, np.abs(np.diag(a)).max()):
        raise NotPositiveDefiniteError(f"alpha is numerically singular (pivot {pivots.min():.3g})")


def check_regular(alpha: np.ndarray, beta: np.ndarray) -> float:
    """Validate ``alpha`` SPD, ``beta != 0`` and the convexity bound; return ``||beta||^2``."""
    _check_spd(alpha)
    norm_sq = float(beta @ np.linalg.solve(alpha, beta))
    if np.sqrt(norm_sq) <= BETA_ZERO_TOL:
        raise DegeneratePointError(
            "beta vanishes at the point; the Riemannian (Levi-Civita) fallback applies"
        )
    if np.sqrt(norm_sq) >= 1.0 - CONVEXITY_MARGIN:
        raise ConvexityError(f"||beta||_alpha = {np.sqrt(norm_sq):.12g} is not below 1")
    return norm_sq


def levi_civita(alpha_inv: np.ndarray, dalpha: np.ndarray) -> np.ndarray:
    """``Gamma^k_ij = 1/2 alpha^kl (d_i alpha_jl + d_j alpha_il - d_l alpha_ij)``."""
    lower = 0.5 * (
        np.einsum("jli->lij", dalpha) + np.einsum("ilj->lij", dalpha) - np.einsum("ijl->lij", dalpha)
    )
    return np.einsum("kl,lij->kij", alpha_inv, lower)


def metric_at(spec: RandersMetricSpec, x: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """``alpha_ij(x)`` and ``beta_j(x)`` without derivatives."""
    n = spec.n
    a = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            a[i, j] = a[j, i] = evaluate(spec.alpha[i][j], x)
    b = np.array([evaluate(e, x) for e in spec.beta])
    return a, b


def point_data(spec: RandersMetricSpec, p: Sequence[float], validate: bool = True) -> PointFrameData:
    n = spec.n
    p = np.asarray(p, dtype=float)
    if p.shape != (n,):
        raise ValueError(f"point must have {n} coordinates")
    a = np.empty((n, n))
    da = np.empty((n, n, n))
    for i in range(n):
        for j in range(i, n):
            v, g = eval_with_gradient(spec.alpha[i][j], p)
            a[i, j] = a[j, i] = v
            da[i, j] = da[j, i] = g
    b = np.empty(n)
    db = np.empty((n, n))
    for j in range(n):
        v, g = eval_with_gradient(spec.beta[j], p)
        b[j] = v
        db[:, j] = g
    if validate:
        check_regular(a, b)
    else:
        _check_spd(a)
    ainv = np.linalg.inv(a)
    ainv = 0.5 * (ainv + ainv.T)
    return PointFrameData(p, a, ainv, da, b, db, levi_civita(ainv, da))


def _alpha_len(a: np.ndarray, y: np.ndarray) -> float:
    q = float(y @ a @ y)
    return np.sqrt(q)


def _nonzero(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        raise ValueError("tangent vector must be nonzero")
    return y


def finsler_value(spec: RandersMetricSpec, x: Sequence[float], y: Sequence[float]) -> float:
    """``F(x, y) = sqrt(alpha_ij y^i y^j) + beta_j y^j``."""
    y = _nonzero(y)
    a, b = metric_at(spec, x)
    return _alpha_len(a, y) + float(b @ y)


def alpha_length(spec: RandersMetricSpec, x: Sequence[float], y: Sequence[float]) -> float:
    a, _ = metric_at(spec, x)
    return _alpha_len(a, np.asarray(y, dtype=float))


def dF_dy(spec: RandersMetricSpec, x: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """``dF/dy^r = alpha_rj y^j / alpha(y) + beta_r``."""
    y = _nonzero(y)
    a, b = metric_at(spec, x)
    return a @ y / _alpha_len(a, y) + b


def dF_dy_at(data: PointFrameData, y: np.ndarray) -> np.ndarray:
    y = _nonzero(y)
    a = data.alpha_at_p
    return a @ y / _alpha_len(a, y) + data.beta_at_p


def dF_dx_at(data: PointFrameData, y: np.ndarray) -> np.ndarray:
    """Partial derivatives of F in the position directions."""
    y = _nonzero(y)
    alen = _alpha_len(data.alpha_at_p, y)
    return np.einsum("jki,j,k->i", data.dalpha, y, y) / (2.0 * alen) + data.dbeta @ y


def horizontal_derivative(data: PointFrameData, y: Sequence[float]) -> np.ndarray:
    """``X_i^h F = y^j (d_i beta_j - beta_k Gamma^k_ij)``.

    Only ``beta`` enters because the Levi-Civita connection of ``alpha``
    annihilates ``alpha``.
    """
    y = _nonzero(y)
    return data.dbeta @ y - np.einsum("k,kij,j->i", data.beta_at_p, data.christoffel, y)


def horizontal_derivative_full(data: PointFrameData, y: Sequence[float]) -> np.ndarray:
    """``dF/dx^i - y^j Gamma^k_ij dF/dy^k`` from the raw derivatives of F."""
    y = _nonzero(y)
    return dF_dx_at(data, y) - np.einsum("j,kij,k->i", y, data.christoffel, dF_dy_at(data, y))


def dual_vector(data: PointFrameData) -> tuple[np.ndarray, float]:
    """``beta#^i = alpha^ij beta_j`` and ``||beta#||^2_alpha``."""
    sharp = data.alpha_inv @ data.beta_at_p
    return sharp, float(sharp @ data.beta_at_p)


def norm_sq_gradient(data: PointFrameData) -> np.ndarray:
    """Gradient of ``alpha^jk beta_j beta_k`` in chart coordinates."""
    sharp, _ = dual_vector(data)
    return -np.einsum("j,jki,k->i", sharp, data.dalpha, sharp) + 2.0 * data.dbeta @ sharp
