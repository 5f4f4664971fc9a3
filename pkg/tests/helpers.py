"""Shared generators for the test suite."""

from __future__ import annotations

import numpy as np


def random_expression(rng: np.random.Generator, n: int, depth: int = 3) -> str:
    """Random smooth expression in ``x1..xn``, defined on all of R^n.

    Domain-restricted functions only see arguments that stay in their domain
    (``log(2 + sin(.))``, ``sqrt(1 + (.)^2)``, division by ``2 + cos(.)``).
    """
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.7:
            return f"x{rng.integers(1, n + 1)}"
        return f"{rng.uniform(-2, 2):.4f}"
    sub = lambda: random_expression(rng, n, depth - 1)  # noqa: E731
    kind = rng.integers(0, 11)
    if kind == 0:
        return f"({sub()} + {sub()})"
    if kind == 1:
        return f"({sub()} - {sub()})"
    if kind == 2:
        return f"({sub()} * {sub()})"
    if kind == 3:
        return f"({sub()} / (2 + cos({sub()})))"
    if kind == 4:
        return f"sin({sub()})"
    if kind == 5:
        return f"cos({sub()})"
    if kind == 6:
        return f"exp(sin({sub()}))"
    if kind == 7:
        return f"log(2 + sin({sub()}))"
    if kind == 8:
        return f"sqrt(1 + ({sub()})^2)"
    if kind == 9:
        return f"({sub()})^{rng.integers(0, 4)}"
    return f"-({sub()})"


def central_gradient(f, x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for k in range(len(x)):
        e = np.zeros_like(x)
        e[k] = h
        g[k] = (f(x + e) - f(x - e)) / (2 * h)
    return g
