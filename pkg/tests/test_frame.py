import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randers_extremal.frame import (
    adapted_frame,
    regauge,
    to_adapted,
    torsion_to_adapted,
    torsion_to_chart,
)
from randers_extremal.geometry import DegeneratePointError, RandersMetricSpec, point_data
from randers_extremal.instances import random_generalized_berwald, random_randers, rotating_beta
from randers_extremal.torsion import TorsionTensor, unknown_count


def random_orthogonal(rng, m):
    Q, R = np.linalg.qr(rng.standard_normal((m, m)))
    return Q * np.sign(np.diag(R))


def test_rotating_frame_at_origin():
    data = point_data(rotating_beta(), (0.0, 0.0))
    frame = adapted_frame(data)
    assert frame.B == pytest.approx(np.array([[0.0, 1.0], [1.0, 0.0]]), abs=1e-15)
    assert frame.beta_n_bar == pytest.approx(0.3, abs=1e-15)
    ad = to_adapted(data, frame)
    assert ad.beta_bar == pytest.approx([0.0, 0.3], abs=1e-15)
    assert ad.dbeta_bar == pytest.approx(np.array([[0.0, 0.0], [0.21, 0.0]]), abs=1e-15)
    assert ad.C == pytest.approx(np.array([[0.0, -0.7], [0.0, 0.0]]), abs=1e-15)
    assert ad.S == pytest.approx(np.zeros((1, 1)), abs=1e-15)


def test_rotating_frame_off_origin():
    data = point_data(rotating_beta(), (1.0, 0.0))
    B = adapted_frame(data).B
    s, c = math.sin(0.7), math.cos(0.7)
    assert B == pytest.approx(np.array([[s, c], [-c, s]]), abs=1e-15)


def test_last_vector_needs_nonzero_beta():
    spec = RandersMetricSpec.from_strings([["1", "0"], ["1"]], ["x1", "0"])
    data = point_data(spec, (0.0, 0.0), validate=False)
    with pytest.raises(DegeneratePointError):
        adapted_frame(data)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_frame_invariants(seed, n):
    rng = np.random.default_rng(seed)
    data = point_data(random_randers(n, rng), rng.uniform(-0.5, 0.5, n))
    frame = adapted_frame(data)
    B = frame.B
    assert np.allclose(B.T @ data.alpha_at_p @ B, np.eye(n), atol=1e-12)
    beta_bar = B.T @ data.beta_at_p
    assert np.allclose(beta_bar[:-1], 0.0, atol=1e-13)
    assert beta_bar[-1] == pytest.approx(frame.beta_n_bar, rel=1e-13)
    assert frame.beta_n_bar > 0
    assert frame.beta_n_bar ** 2 == pytest.approx(
        data.beta_at_p @ data.alpha_inv @ data.beta_at_p, rel=1e-12
    )
    assert np.allclose(frame.B_inv @ B, np.eye(n), atol=1e-12)


def test_frame_with_beta_along_first_axis_n3():
    # beta# parallel to d_1: Gram-Schmidt must skip the vanishing residual of d_1
    spec = RandersMetricSpec.from_strings([["1", "0", "0"], ["1", "0"], ["1"]], ["0.5", "0", "0"])
    frame = adapted_frame(point_data(spec, (0.0, 0.0, 0.0)))
    assert frame.B == pytest.approx(np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=float), abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_torsion_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    data = point_data(random_randers(n, rng), rng.uniform(-0.5, 0.5, n))
    frame = adapted_frame(data)
    T = TorsionTensor(n, rng.standard_normal(unknown_count(n)))
    back = torsion_to_adapted(torsion_to_chart(T, frame), frame)
    assert np.allclose(back.components, T.components, atol=1e-12)


@pytest.mark.parametrize("n, seed", [(3, 10), (4, 11)])
def test_regauge_keeps_frame_adapted(n, seed):
    rng = np.random.default_rng(seed)
    spec, _ = random_generalized_berwald(n, rng)
    data = point_data(spec, rng.uniform(-0.5, 0.5, n))
    frame = regauge(adapted_frame(data), random_orthogonal(rng, n - 1))
    B = frame.B
    assert np.allclose(B.T @ data.alpha_at_p @ B, np.eye(n), atol=1e-12)
    assert np.allclose((B.T @ data.beta_at_p)[:-1], 0.0, atol=1e-13)
    ad = to_adapted(data, frame)
    # the solvability row vanishes in every gauge
    assert np.allclose(ad.C[n - 1], 0.0, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_adapted_christoffel_symmetric(seed, n):
    rng = np.random.default_rng(seed)
    data = point_data(random_randers(n, rng), rng.uniform(-0.5, 0.5, n))
    ad = to_adapted(data, adapted_frame(data))
    assert np.allclose(ad.gamma_bar, ad.gamma_bar.transpose(0, 2, 1), atol=1e-15)
    assert np.allclose(ad.S, ad.S.T, atol=1e-15)
