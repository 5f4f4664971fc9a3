"""Adapted orthonormal frames at a point.

The adapted coordinates are realised as the constant affine change
``u = p + B ubar``: the columns of ``B`` are alpha-orthonormal, the last one
points along ``beta#`` and the others span ``ker beta``. Only first
derivatives at ``p`` are needed, for which the constant-``B`` rules are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import DegeneratePointError, PointFrameData, BETA_ZERO_TOL, dual_vector
from .torsion import TorsionTensor, transform

GS_SKIP_TOL = 1e-10


@dataclass(frozen=True)
class AdaptedFrame:
    B: np.ndarray  # columns: adapted basis vectors in chart coordinates
    B_inv: np.ndarray
    beta_n_bar: float

    @property
    def n(self) -> int:
        return self.B.shape[0]


@dataclass(frozen=True)
class AdaptedPointData:
    """Point data in the adapted frame.

    ``C[j, i]`` holds ``C_{j;i} = Gamma^n_ij - dbeta_j/dx^i / beta_n`` and
    ``S[a, c] = C_{c;a} + C_{a;c}`` for ``a, c < n``.
    """

    frame: AdaptedFrame
    gamma_bar: np.ndarray
    beta_bar: np.ndarray
    dbeta_bar: np.ndarray
    C: np.ndarray
    S: np.ndarray

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def beta_n(self) -> float:
        return self.frame.beta_n_bar


def _a_dot(a: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    return float(u @ a @ v)


def adapted_frame(data: PointFrameData) -> AdaptedFrame:
    """Alpha-orthonormal frame with the last vector along ``beta#``.

    The first ``n-1`` vectors come from Gram-Schmidt (w.r.t. ``alpha``) on the
    chart basis ``d_1 .. d_n`` after removing the ``beta#`` component, in index
    order, skipping the one vector with (numerically) no residual.
    """
    n = data.n
    a = data.alpha_at_p
    sharp, norm_sq = dual_vector(data)
    norm = np.sqrt(norm_sq)
    if norm <= BETA_ZERO_TOL:
        raise DegeneratePointError(
            "beta vanishes at the point; the Riemannian (Levi-Civita) fallback applies"
        )
    e_n = sharp / norm
    basis = []
    for k in range(n):
        if len(basis) == n - 1:
            break
        v = np.zeros(n)
        v[k] = 1.0
        # two sweeps keep alpha-orthogonality at round-off level
        for _ in range(2):
            v = v - _a_dot(a, e_n, v) * e_n
            for u in basis:
                v = v - _a_dot(a, u, v) * u
        length = np.sqrt(max(_a_dot(a, v, v), 0.0))
        if length < GS_SKIP_TOL:
            continue
        basis.append(v / length)
    B = np.column_stack(basis + [e_n])
    return AdaptedFrame(B, np.linalg.inv(B), float(data.beta_at_p @ e_n))


def regauge(frame: AdaptedFrame, Q: np.ndarray) -> AdaptedFrame:
    """Rotate the kernel part of the frame: ``B -> B diag(Q, 1)`` with ``Q`` orthogonal."""
    n = frame.n
    R = np.eye(n)
    R[: n - 1, : n - 1] = Q
    B = frame.B @ R
    return AdaptedFrame(B, np.linalg.inv(B), frame.beta_n_bar)


def to_adapted(data: PointFrameData, frame: AdaptedFrame) -> AdaptedPointData:
    B, Binv = frame.B, frame.B_inv
    n = data.n
    beta_bar = B.T @ data.beta_at_p
    dbeta_bar = B.T @ data.dbeta @ B
    gamma_bar = np.einsum("ck,ia,jb,kij->cab", Binv, B, B, data.christoffel)
    gamma_bar = 0.5 * (gamma_bar + gamma_bar.transpose(0, 2, 1))
    bn = frame.beta_n_bar
    C = gamma_bar[n - 1] - dbeta_bar.T / bn
    C_front = C[: n - 1, : n - 1]
    S = C_front + C_front.T
    return AdaptedPointData(frame, gamma_bar, beta_bar, dbeta_bar, C, S)


def torsion_to_chart(T_bar: TorsionTensor, frame: AdaptedFrame) -> TorsionTensor:
    """Adapted-frame components to chart components (torsion is a tensor)."""
    return transform(T_bar, frame.B_inv)


def torsion_to_adapted(T: TorsionTensor, frame: AdaptedFrame) -> TorsionTensor:
    return transform(T, frame.B)
