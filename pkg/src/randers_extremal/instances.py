"""Reference Randers metrics used by the tests and demos."""

from __future__ import annotations

import numpy as np

from .geometry import RandersMetricSpec


def _identity(n: int) -> list:
    return [["1" if i == j else "0" for j in range(n)] for i in range(n)]


def rotating_beta(r: float = 0.3, k: float = 0.7) -> RandersMetricSpec:
    """Flat ``alpha`` with ``beta = r (cos(k x1), sin(k x1))``: constant norm ``r``."""
    return RandersMetricSpec.from_strings(
        _identity(2), [f"{r!r}*cos({k!r}*x1)", f"{r!r}*sin({k!r}*x1)"]
    )


def flat_constant(beta) -> RandersMetricSpec:
    """Flat ``alpha``, constant ``beta``: a Berwald (Minkowski) space."""
    n = len(beta)
    return RandersMetricSpec.from_strings(_identity(n), [repr(float(b)) for b in beta])


def growing_beta() -> RandersMetricSpec:
    """Flat ``alpha`` with ``beta = (x1, 0)``; the norm is not constant."""
    return RandersMetricSpec.from_strings(_identity(2), ["x1", "0"])


def polar_berwald(bx: float = 0.3, by: float = 0.2) -> RandersMetricSpec:
    """The constant covector ``bx dx + by dy`` of the plane in polar coordinates ``(r, theta)``.

    ``beta`` is parallel for the (curved-coordinate) Levi-Civita connection,
    so the extremal connection is the Levi-Civita one. Valid for ``x1 > 0``.
    """
    return RandersMetricSpec.from_strings(
        [["1", "0"], ["x1^2"]],
        [
            f"{bx!r}*cos(x2) + {by!r}*sin(x2)",
            f"x1*({-bx!r}*sin(x2) + {by!r}*cos(x2))",
        ],
    )


def _wave(rng: np.random.Generator, n: int, amp: float, func: str) -> str:
    coeffs = rng.uniform(-1.0, 1.0, n)
    phase = rng.uniform(-np.pi, np.pi)
    arg = " + ".join(f"{c:.6f}*x{j + 1}" for j, c in enumerate(coeffs))
    return f"{amp!r}*{func}({arg} + {phase:.6f})"


def random_alpha(n: int, rng: np.random.Generator) -> list:
    """Diagonally dominant (hence SPD everywhere) metric components, upper triangle."""
    rows = []
    for i in range(n):
        row = []
        for j in range(i, n):
            if i == j:
                row.append(f"1.5 + {_wave(rng, n, 0.3, 'sin')}")
            else:
                row.append(_wave(rng, n, 0.1, "cos"))
        rows.append(row)
    return rows


def random_generalized_berwald(
    n: int, rng: np.random.Generator, c: float | None = None
) -> tuple[RandersMetricSpec, float]:
    """Random ``alpha`` and ``beta = c alpha(U, .)`` with ``U`` alpha-normalised.

    ``U`` has last component at least 0.7, so it never vanishes, and
    ``||beta#||_alpha = c`` everywhere. Returns the metric and ``c``.
    """
    c = float(rng.uniform(0.2, 0.8)) if c is None else float(c)
    upper = random_alpha(n, rng)

    def a(i, j):
        i, j = min(i, j), max(i, j)
        return f"({upper[i][j - i]})"

    U = []
    for k in range(n):
        base = 1.0 if k == n - 1 else float(rng.uniform(-0.5, 0.5))
        U.append(f"({base:.6f} + {_wave(rng, n, 0.3, 'sin')})")
    quad = " + ".join(
        f"{a(k, k)}*{U[k]}^2" if k == l else f"2*{a(k, l)}*{U[k]}*{U[l]}"
        for k in range(n)
        for l in range(k, n)
    )
    beta = [
        f"{c!r}*(" + " + ".join(f"{a(j, k)}*{U[k]}" for k in range(n)) + f")/sqrt({quad})"
        for j in range(n)
    ]
    return RandersMetricSpec.from_strings(upper, beta), c


def random_randers(n: int, rng: np.random.Generator) -> RandersMetricSpec:
    """Random ``alpha`` and a small random ``beta`` whose norm is generally not constant."""
    upper = random_alpha(n, rng)
    beta = [f"{rng.uniform(0.1, 0.2):.6f} + {_wave(rng, n, 0.1, 'sin')}" for _ in range(n)]
    return RandersMetricSpec.from_strings(upper, beta)


def random_points(n: int, rng: np.random.Generator, count: int, box: float = 0.5) -> np.ndarray:
    return rng.uniform(-box, box, (count, n))
