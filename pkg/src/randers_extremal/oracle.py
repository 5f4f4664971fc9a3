"""Brute-force solution of the pointwise compatibility system.

The system is assembled straight from the general coefficient formula for
an arbitrary Riemannian environment ``gamma`` (here ``gamma = alpha``) and the
horizontal derivatives of F, sampled on a finite set of tangent vectors. Its
minimum-norm solution and kernel are then read off a singular value
decomposition. Nothing here uses the closed-form Randers formulas.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import comb
from typing import Sequence, Union

import numpy as np

from .frame import AdaptedPointData
from .geometry import PointFrameData, dF_dy_at, horizontal_derivative_full
from .torsion import TorsionTensor, layout, transform, unknown_count

SVD_CUTOFF = 1e-9
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class CompatibilitySystem:
    """Stacked rows ``sum sigma~_{ab;i}^c(v) T_ab^c = -2 X_i^h F(v)``.

    ``coords`` is ``"adapted"`` (unknowns are adapted-frame components) or
    ``"chart"``. ``orthonormal_map`` ``M`` sends components in an
    alpha-orthonormal basis to the unknowns, so that minimum-norm means
    minimum torsion norm in both modes.
    """

    n: int
    rows: np.ndarray
    rhs: np.ndarray
    sample_vs: np.ndarray
    coords: str
    orthonormal_map: np.ndarray

    @property
    def unknown_count(self) -> int:
        return unknown_count(self.n)


@dataclass(frozen=True)
class SolutionSpace:
    particular: TorsionTensor
    null_basis: tuple  # TorsionTensor, orthonormal in the torsion norm
    residual: float
    affine_dimension: int
    singular_values: np.ndarray
    system: CompatibilitySystem

    @property
    def solvable(self) -> bool:
        return bool(self.residual <= RESIDUAL_TOL * (1.0 + np.linalg.norm(self.system.rhs)))

    def to_orthonormal(self, T: TorsionTensor) -> np.ndarray:
        """Components of ``T`` in the orthonormal coordinates of the solve."""
        return np.linalg.solve(self.system.orthonormal_map, T.components)

    def inner(self, T: TorsionTensor, S: TorsionTensor) -> float:
        return float(self.to_orthonormal(T) @ self.to_orthonormal(S))


@dataclass(frozen=True)
class CrossValidation:
    difference: float
    null_projection: float
    closed_form_residual: float
    particular_norm: float
    solvable: bool
    passed: bool


def default_samples(n: int, rng: np.random.Generator | None = None, extra: int | None = None) -> np.ndarray:
    """``+-e_a``, ``e_a + e_b`` (a < b) and ``extra`` (default ``4n``) random unit vectors."""
    rng = np.random.default_rng(0) if rng is None else rng
    extra = 4 * n if extra is None else extra
    eye = np.eye(n)
    vs = [eye[a] for a in range(n)] + [-eye[a] for a in range(n)]
    vs += [eye[a] + eye[b] for a in range(n) for b in range(a + 1, n)]
    r = rng.standard_normal((extra, n))
    vs += list(r / np.linalg.norm(r, axis=1, keepdims=True))
    return np.array(vs)


def recommended_sample_count(n: int) -> int:
    return 2 * n + comb(n, 2)


def _sigma_tilde(gamma: np.ndarray, gamma_inv: np.ndarray, y: np.ndarray, Fy: np.ndarray) -> np.ndarray:
    """Coefficient table ``[slot, i]`` for a general metric ``gamma``.

    sigma~_{ab;i}^c = (y^a g^br - y^b g^ar) F_r g_ic
                      + (d_i^a g^br - d_i^b g^ar) F_r y^j g_jc
                      - (d_i^a y^b - d_i^b y^a) F_c
    """
    n = len(y)
    up = gamma_inv @ Fy  # g^{kr} F_r
    gy = gamma @ y  # y^j g_jc
    out = np.zeros((unknown_count(n), n))
    for k, s in enumerate(layout(n)):
        a, b, c = s.a, s.b, s.c
        row = (y[a] * up[b] - y[b] * up[a]) * gamma[:, c]
        row[a] += up[b] * gy[c] - y[b] * Fy[c]
        row[b] += -up[a] * gy[c] + y[a] * Fy[c]
        out[k] = row
    return out


def _orthonormal_basis(alpha: np.ndarray) -> np.ndarray:
    # E^T alpha E = I with E = L^{-T}, alpha = L L^T
    L = np.linalg.cholesky(alpha)
    return np.linalg.inv(L).T


def _orthonormal_map(E: np.ndarray, n: int) -> np.ndarray:
    """Matrix taking orthonormal-basis components to chart components."""
    Einv = np.linalg.inv(E)
    cols = []
    for k in range(unknown_count(n)):
        e = np.zeros(unknown_count(n))
        e[k] = 1.0
        cols.append(transform(TorsionTensor(n, e), Einv).components)
    return np.column_stack(cols)


def assemble(data: Union[PointFrameData, AdaptedPointData], samples: Sequence[Sequence[float]]) -> CompatibilitySystem:
    """Stack the compatibility equations for every sampled tangent vector.

    Chart mode (``PointFrameData``) uses ``gamma = alpha(p)`` and the full
    horizontal derivative of F. Adapted mode uses the identity metric and
    F restricted to the adapted frame, ``|y| + beta_bar . y``.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if np.any(~samples.any(axis=1)):
        raise ValueError("sample vectors must be nonzero")
    rows, rhs = [], []
    if isinstance(data, AdaptedPointData):
        n = data.n
        eye = np.eye(n)
        bb, dbb, gb = data.beta_bar, data.dbeta_bar, data.gamma_bar
        for v in samples:
            Fy = v / np.linalg.norm(v) + bb
            hor = dbb @ v - np.einsum("k,kij,j->i", bb, gb, v)
            rows.append(_sigma_tilde(eye, eye, v, Fy).T)
            rhs.append(-2.0 * hor)
        M = np.eye(unknown_count(n))
        coords = "adapted"
    else:
        n = data.n
        a, ainv = data.alpha_at_p, data.alpha_inv
        for v in samples:
            rows.append(_sigma_tilde(a, ainv, v, dF_dy_at(data, v)).T)
            rhs.append(-2.0 * horizontal_derivative_full(data, v))
        M = _orthonormal_map(_orthonormal_basis(a), n)
        coords = "chart"
    if samples.shape[1] != n:
        raise ValueError(f"samples must have {n} components")
    return CompatibilitySystem(n, np.vstack(rows), np.concatenate(rhs), samples, coords, M)


def min_norm_solve(sys: CompatibilitySystem, tol: float = SVD_CUTOFF) -> SolutionSpace:
    """Minimum-norm least-squares solution and orthonormal kernel basis."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    n, M = sys.n, sys.orthonormal_map
    A = sys.rows @ M
    U, s, Vt = np.linalg.svd(A, full_matrices=True)
    cutoff = tol * (s[0] if s.size and s[0] > 0 else 1.0)
    rank = int(np.sum(s > cutoff))
    coef = (U[:, :rank].T @ sys.rhs) / s[:rank]
    z = Vt[:rank].T @ coef
    kernel = Vt[rank:]
    residual = float(np.linalg.norm(sys.rows @ (M @ z) - sys.rhs))
    null_basis = tuple(TorsionTensor(n, M @ k) for k in kernel)
    return SolutionSpace(TorsionTensor(n, M @ z), null_basis, residual, len(kernel), s, sys)


def solve_point(
    data: Union[PointFrameData, AdaptedPointData],
    rng: np.random.Generator | None = None,
    extra: int | None = None,
    tol: float = SVD_CUTOFF,
    check_stability: bool = True,
) -> SolutionSpace:
    """Assemble with the default sampling and solve; warn if doubling the samples changes the dimension."""
    n = data.n
    extra = 4 * n if extra is None else extra
    rng = np.random.default_rng(0) if rng is None else rng
    samples = default_samples(n, rng, extra)
    space = min_norm_solve(assemble(data, samples), tol)
    if check_stability:
        more = np.vstack([samples, default_samples(n, rng, extra)])
        again = min_norm_solve(assemble(data, more), tol)
        if again.affine_dimension != space.affine_dimension:
            warnings.warn(
                f"solution-space dimension unstable under resampling: "
                f"{space.affine_dimension} vs {again.affine_dimension}",
                RuntimeWarning,
                stacklevel=2,
            )
    return space


def cross_validate(closed_form: TorsionTensor, space: SolutionSpace, rtol: float = 1e-7) -> CrossValidation:
    """Compare a closed-form torsion with the oracle's minimum-norm solution."""
    if closed_form.n != space.system.n:
        raise ValueError("dimension mismatch")
    sys = space.system
    diff_vec = space.to_orthonormal(closed_form) - space.to_orthonormal(space.particular)
    diff = float(np.linalg.norm(diff_vec))
    proj = 0.0
    if space.null_basis:
        K = np.array([space.to_orthonormal(z) for z in space.null_basis])
        proj = float(np.linalg.norm(K @ diff_vec))
    res = float(np.linalg.norm(sys.rows @ closed_form.components - sys.rhs))
    pnorm = float(np.linalg.norm(space.to_orthonormal(space.particular)))
    res_ok = bool(res <= RESIDUAL_TOL * (1.0 + np.linalg.norm(sys.rhs)))
    passed = bool(diff <= rtol * (1.0 + pnorm)) and res_ok
    return CrossValidation(diff, proj, res, pnorm, space.solvable, passed)
