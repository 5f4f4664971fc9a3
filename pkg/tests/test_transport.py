import numpy as np
import pytest

from randers_extremal.geometry import RandersMetricSpec
from randers_extremal.instances import flat_constant, random_generalized_berwald, rotating_beta
from randers_extremal.transport import (
    Curve,
    TransportError,
    holonomy_defect,
    parallel_transport,
    unit_square_loop,
)

LINE = Curve.from_strings(["t", "0"])


def test_curve_point_and_velocity():
    c = Curve.from_strings(["t^2", "sin(t)"])
    assert c.point(0.5) == pytest.approx([0.25, np.sin(0.5)])
    x, dx = c.velocity(0.5)
    assert dx == pytest.approx([1.0, np.cos(0.5)])


def test_square_loop_segments():
    sq = unit_square_loop((0.5, -0.5), 0.4)
    assert len(sq.segments) == 4
    assert sq.closure_gap() < 1e-15
    assert sq.point(0.25, 0) == pytest.approx([0.9, -0.5])
    assert sq.point(0.5, 1) == pytest.approx([0.9, -0.1])
    assert sq.velocity(0.6, 2)[1] == pytest.approx([-1.6, 0.0])


def test_flat_constant_transport_is_trivial():
    spec = flat_constant([0.2, -0.1, 0.05])
    curve = Curve.from_strings(["t", "2*t^2", "sin(t)"])
    res = parallel_transport(spec, curve, [1.0, 2.0, -0.5], 50)
    assert np.array_equal(res.X[-1], [1.0, 2.0, -0.5])
    assert res.F_drift == 0.0


def test_rotating_beta_transport_rotates_with_beta():
    res = parallel_transport(rotating_beta(), LINE, [1.0, 0.0], 400)
    # Gamma^1_12 = k, Gamma^2_11 = -k along x2 = 0, so X turns at rate k
    assert res.X[-1] == pytest.approx([np.cos(0.7), np.sin(0.7)], abs=1e-12)
    assert res.F_drift < 1e-12
    assert res.alpha_drift < 1e-12


def test_levi_civita_control_breaks_F():
    res = parallel_transport(rotating_beta(), LINE, [1.0, 0.0], 100, levi_civita=True)
    assert np.array_equal(res.X[-1], [1.0, 0.0])
    assert res.alpha_drift == 0.0
    assert res.F_drift > 1e-3


def test_convergence_order():
    spec, _ = random_generalized_berwald(3, np.random.default_rng(3))
    curve = Curve.from_strings(["0.3*t", "0.2*sin(t)", "-0.1*t^2"])
    coarse = parallel_transport(spec, curve, [1.0, 0.5, -0.2], 10).F_drift
    fine = parallel_transport(spec, curve, [1.0, 0.5, -0.2], 20).F_drift
    assert coarse / fine >= 8.0


def test_transport_is_linear():
    spec, _ = random_generalized_berwald(2, np.random.default_rng(5))
    curve = Curve.from_strings(["0.4*t", "0.3*t^2"])
    X = parallel_transport(spec, curve, [1.0, 0.0], 100).X[-1]
    Y = parallel_transport(spec, curve, [0.0, 1.0], 100).X[-1]
    Z = parallel_transport(spec, curve, [2.0, -3.0], 100).X[-1]
    assert Z == pytest.approx(2 * X - 3 * Y, abs=1e-13)


def test_square_holonomy_preserves_F():
    X, drift = holonomy_defect(rotating_beta(), unit_square_loop(), [0.3, 1.0], 400)
    assert drift < 1e-10
    # flat alpha and a loop in the x1 x2 plane: holonomy is a rotation by the net x1 change
    assert np.linalg.norm(X) == pytest.approx(np.hypot(0.3, 1.0), rel=1e-10)


def test_holonomy_requires_closed_curve():
    with pytest.raises(ValueError):
        holonomy_defect(rotating_beta(), LINE, [1.0, 0.0], 10)


def test_argument_checks():
    spec = rotating_beta()
    with pytest.raises(ValueError):
        parallel_transport(spec, LINE, [0.0, 0.0], 10)
    with pytest.raises(ValueError):
        parallel_transport(spec, LINE, [1.0, 0.0, 0.0], 10)
    with pytest.raises(ValueError):
        parallel_transport(spec, unit_square_loop(), [1.0, 0.0], 10)
    with pytest.raises(ValueError):
        Curve.from_strings(["t"], segments=[["t"]])


def test_leaving_the_domain_raises():
    spec = RandersMetricSpec.from_strings([["1", "0"], ["1"]], ["0.2 + x1", "0"])
    curve = Curve.from_strings(["t - 1", "0"])  # beta hits zero at x1 = -0.2
    with pytest.raises(TransportError):
        parallel_transport(spec, curve, [1.0, 0.0], 10, strict=False)


def test_rotating_line_at_step_1e3():
    res = parallel_transport(rotating_beta(), LINE, [1.0, 0.0], 1000)
    assert res.F_drift <= 1e-8
    assert res.t[0] == 0.0 and np.all(np.diff(res.t) > 0)
    assert np.array_equal(res.X[0], [1.0, 0.0])
    assert res.step_size == 1e-3


def test_square_holonomy_fine_grid():
    X, drift = holonomy_defect(rotating_beta(), unit_square_loop(), [1.0, 0.0], 2000)
    assert drift <= 1e-7


def test_flat_constant_loop_has_trivial_holonomy():
    X, drift = holonomy_defect(flat_constant([0.3, 0.1]), unit_square_loop((1.0, 2.0), 0.5), [0.2, -1.0], 40)
    assert np.array_equal(X, [0.2, -1.0]) and drift == 0.0
