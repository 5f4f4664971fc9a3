"""Acceptance criteria, one test each. Every test prints a single PASS/FAIL line."""

import time
import warnings
from math import comb

import numpy as np
import pytest

from helpers import central_gradient, random_expression
from randers_extremal.connection import extremal_connection, global_solvability, levi_civita_connection
from randers_extremal.expr import eval_with_gradient, evaluate, parse
from randers_extremal.frame import adapted_frame, regauge, to_adapted
from randers_extremal.geometry import point_data
from randers_extremal.instances import (
    flat_constant,
    growing_beta,
    polar_berwald,
    random_generalized_berwald,
    random_points,
    rotating_beta,
)
from randers_extremal.oracle import assemble, cross_validate, default_samples, min_norm_solve, solve_point
from randers_extremal.torsion import SlotKind, TorsionTensor, appearing_count, kind_mask, layout, unknown_count
from randers_extremal.transport import Curve, parallel_transport


@pytest.fixture
def report(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
    return emit


def random_orthogonal(rng, m):
    Q, R = np.linalg.qr(rng.standard_normal((m, m)))
    return Q * np.sign(np.diag(R))


def test_c01_counting_fidelity(report):
    t0 = time.perf_counter()
    appearing = [unknown_count(n) - int(kind_mask(n, SlotKind.FRONT_SHORT).sum()) for n in (2, 3, 4)]
    formula = [appearing_count(n) for n in (2, 3, 4)]
    total4 = len(layout(4))
    zero4 = sum(s.kind is SlotKind.FRONT_SHORT for s in layout(4))
    elapsed = time.perf_counter() - t0
    ok = appearing == formula == [2, 7, 15] and total4 == 24 and zero4 == 9 and elapsed < 1.0
    report("C1 counting", ok, f"appearing={appearing} total(n=4)={total4} zero(n=4)={zero4} t={elapsed:.3f}s")
    assert ok


def test_c02_dimension_formula(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    found = {}
    for n in (2, 3, 4):
        expected = n * comb(n - 1, 2)
        dims = []
        for _ in range(10):
            spec, _ = random_generalized_berwald(n, rng)
            data = point_data(spec, random_points(n, rng, 1)[0])
            S = default_samples(n, rng)
            once = min_norm_solve(assemble(data, S), 1e-9).affine_dimension
            twice = min_norm_solve(assemble(data, np.vstack([S, default_samples(n, rng)])), 1e-9).affine_dimension
            dims.append((once, twice))
        found[n] = (expected, dims)
    elapsed = time.perf_counter() - t0
    ok = all(all(d == (e, e) for d in dims) for e, dims in found.values()) and elapsed < 10.0
    summary = " ".join(f"n={n}:{sorted({d for pair in dims for d in pair})}" for n, (_, dims) in found.items())
    report("C2 dimension formula", ok, f"{summary} (expected 0/3/12) t={elapsed:.2f}s")
    assert ok


def test_c03_closed_form_equals_oracle(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst, count, failures = 0.0, 0, 0
    for n in (2, 3, 4):
        for _ in range(20):
            spec, _ = random_generalized_berwald(n, rng)
            for p in random_points(n, rng, 5):
                res = extremal_connection(spec, p)
                for data, T in ((res.adapted, res.torsion_adapted), (res.data, res.torsion_chart)):
                    cv = cross_validate(T, solve_point(data, rng, check_stability=False))
                    rel = cv.difference / (1.0 + cv.particular_norm)
                    worst = max(worst, rel)
                    failures += rel > 1e-7
                    count += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 30.0
    report("C3 closed form = oracle", ok, f"{count} comparisons, worst rel diff {worst:.2e} (tol 1e-7) t={elapsed:.2f}s")
    assert ok


def test_c04_rotating_worked_instance(report):
    res = extremal_connection(rotating_beta(), (0.0, 0.0))
    space = solve_point(res.adapted)
    errs = [
        np.abs(res.torsion_adapted.components - [0.0, -0.7]).max(),
        abs(res.torsion_chart.get(0, 1, 0) - 0.7),
        np.abs(space.particular.components - [0.0, -0.7]).max(),
    ]
    ok = max(errs) <= 1e-9 and space.affine_dimension == 0
    report(
        "C4 rotating beta at origin", ok,
        f"adapted={np.round(res.torsion_adapted.components, 12).tolist()} "
        f"T_12^1={res.torsion_chart.get(0, 1, 0):.12f} dim={space.affine_dimension} max err {max(errs):.1e}",
    )
    assert ok


def test_c05_solvability_detector(report):
    rng = np.random.default_rng(5)
    accepted = [
        global_solvability(rotating_beta(), random_points(2, rng, 50, box=3.0), tol=1e-9).verdict,
        global_solvability(flat_constant([0.3, -0.2]), random_points(2, rng, 10)).verdict,
    ]
    for n in (2, 3, 4):
        spec, _ = random_generalized_berwald(n, rng)
        accepted.append(global_solvability(spec, random_points(n, rng, 10)).verdict)
    pts = random_points(2, rng, 20)
    pts = pts[np.abs(pts[:, 0]) > 1e-3]
    rep = global_solvability(growing_beta(), pts)
    analytic = float(np.max(2 * np.abs(pts[:, 0])))
    gap = abs(rep.max_violation - analytic)
    ok = all(accepted) and rep.verdict is False and gap <= 1e-9
    report(
        "C5 solvability detector", ok,
        f"constant-norm accepted={accepted} growing rejected={not rep.verdict} "
        f"max_violation={rep.max_violation:.12f} vs 2|x1|={analytic:.12f}",
    )
    assert ok


def test_c06_transport_invariance(report):
    rng = np.random.default_rng(6)
    cases = [
        ("rotating", rotating_beta(), Curve.from_strings(["t", "0.5*sin(2*t)"]), [0.3, 1.0]),
        ("polar", polar_berwald(), Curve.from_strings(["1 + 0.5*t", "2*t"]), [1.0, -0.4]),
        ("constant", flat_constant([0.2, 0.1, -0.3]), Curve.from_strings(["t", "t^2", "-t"]), [1.0, 0.0, 1.0]),
    ]
    for n in (2, 3):
        spec, _ = random_generalized_berwald(n, rng)
        coords = ["0.4*t", "0.3*sin(2*t)", "-0.2*t^2"][:n]
        cases.append((f"random n={n}", spec, Curve.from_strings(coords), rng.standard_normal(n)))
    drifts = {name: parallel_transport(spec, c, X0, 1000).F_drift for name, spec, c, X0 in cases}

    ratios = []
    for name, spec, c, X0 in cases[:1] + cases[3:]:
        coarse = parallel_transport(spec, c, X0, 10).F_drift
        fine = parallel_transport(spec, c, X0, 20).F_drift
        ratios.append(coarse / fine)

    control = parallel_transport(rotating_beta(), Curve.from_strings(["t", "0"]), [1.0, 0.0], 1000, levi_civita=True)
    ok = (
        max(drifts.values()) <= 1e-6
        and min(ratios) >= 8.0
        and control.F_drift >= 1e-3
        and control.alpha_drift <= 1e-8
    )
    report(
        "C6 transport invariance", ok,
        f"max F_drift(h=1e-3)={max(drifts.values()):.1e} halving ratios={[round(r, 1) for r in ratios]} "
        f"Levi-Civita F_drift={control.F_drift:.3f} alpha_drift={control.alpha_drift:.1e}",
    )
    assert ok


def test_c07_gauge_invariance(report):
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in (2, 3, 4):
        spec, _ = random_generalized_berwald(n, rng)
        for p in random_points(n, rng, 3):
            data = point_data(spec, p)
            base = extremal_connection(spec, p).torsion_chart.components
            frame = adapted_frame(data)
            for _ in range(10):
                gauged = regauge(frame, random_orthogonal(rng, n - 1))
                T = extremal_connection(spec, p, frame=gauged).torsion_chart.components
                worst = max(worst, np.abs(T - base).max())
    ok = worst <= 1e-9
    report("C7 frame gauge invariance", ok, f"max chart torsion change over 90 gauges {worst:.1e} (tol 1e-9)")
    assert ok


def test_c08_minimality(report):
    rng = np.random.default_rng(8)
    worst = np.inf
    for n in (3, 4):
        spec, _ = random_generalized_berwald(n, rng)
        res = extremal_connection(spec, random_points(n, rng, 1)[0])
        space = solve_point(res.adapted, rng)
        T = res.torsion_adapted.components
        K = np.array([z.components for z in space.null_basis])
        for _ in range(50):
            Z = rng.standard_normal(len(K)) @ K * rng.uniform(0.01, 2.0)
            gain = np.sum((T + Z) ** 2) - np.sum(T**2)
            worst = min(worst, gain / np.sum(Z**2))
    ok = worst >= 1 - 1e-8
    report("C8 minimality", ok, f"min (|T+Z|^2-|T|^2)/|Z|^2 over 100 kernel perturbations = {worst:.12f}")
    assert ok


def test_c09_ad_correctness(report):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        e = parse(random_expression(rng, n, 4), n)
        x = rng.uniform(-1.5, 1.5, n)
        _, g = eval_with_gradient(e, x)
        fd = central_gradient(lambda z: evaluate(e, z), x)
        worst = max(worst, float(np.max(np.abs(g - fd) / np.maximum(1.0, np.abs(g)))))
    ok = worst <= 1e-6
    report("C9 AD correctness", ok, f"1000 expression/point pairs, worst relative gap {worst:.1e} (tol 1e-6)")
    assert ok


def test_c10_berwald_degeneration(report):
    rng = np.random.default_rng(10)
    cases = [(polar_berwald(), p) for p in ([1.0, 0.0], [2.0, 1.0], [0.4, -2.5])]
    cases += [(flat_constant([0.1, -0.2, 0.3]), p) for p in random_points(3, rng, 3)]
    worst_T = worst_G = worst_parallel = 0.0
    for spec, p in cases:
        res = extremal_connection(spec, p)
        ad = res.adapted
        # beta is parallel: d_a beta_b = Gamma^n_ab beta_n in the adapted frame
        worst_parallel = max(worst_parallel, np.abs(ad.dbeta_bar - ad.gamma_bar[-1] * ad.beta_n).max())
        worst_T = max(worst_T, res.torsion_adapted.norm())
        worst_G = max(worst_G, np.abs(res.coefficients.gamma - levi_civita_connection(spec, p).gamma).max())
    ok = worst_parallel <= 1e-10 and worst_T <= 1e-10 and worst_G <= 1e-10
    report("C10 Berwald degeneration", ok, f"|T|={worst_T:.1e} |Gamma-Gamma*|={worst_G:.1e} parallel check {worst_parallel:.1e}")
    assert ok
