"""Dual numbers for first-order forward-mode differentiation."""

from __future__ import annotations

import math


class Dual:
    """Dual number ``a + b*eps`` with ``eps**2 == 0``.

    The real part follows exactly the same floating point operations as the
    plain evaluation path, so ``Dual(x, 1.0)`` pushed through a formula yields
    a real part bit-identical to the formula evaluated on ``x``.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: float, b: float = 0.0):
        self.a = a
        self.b = b

    def __repr__(self) -> str:
        return f"Dual({self.a!r}, {self.b!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, Dual):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    __hash__ = None

    def __neg__(self) -> Dual:
        return Dual(-self.a, -self.b)

    def __add__(self, other) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.a + other.a, self.b + other.b)
        return Dual(self.a + other, self.b)

    def __radd__(self, other) -> Dual:
        return Dual(other + self.a, self.b)

    def __sub__(self, other) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.a - other.a, self.b - other.b)
        return Dual(self.a - other, self.b)

    def __rsub__(self, other) -> Dual:
        return Dual(other - self.a, -self.b)

    def __mul__(self, other) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.a * other.a, self.a * other.b + self.b * other.a)
        return Dual(self.a * other, self.b * other)

    def __rmul__(self, other) -> Dual:
        return Dual(other * self.a, other * self.b)

    def __truediv__(self, other) -> Dual:
        if isinstance(other, Dual):
            q = self.a / other.a
            return Dual(q, (self.b * other.a - self.a * other.b) / (other.a * other.a))
        return Dual(self.a / other, self.b / other)

    def __rtruediv__(self, other) -> Dual:
        q = other / self.a
        return Dual(q, -other * self.b / (self.a * self.a))

    def __pow__(self, k: int) -> Dual:
        # integer exponents only
        if k == 0:
            return Dual(self.a**0, 0.0)
        return Dual(self.a**k, k * self.a ** (k - 1) * self.b)

    def sin(self) -> Dual:
        return Dual(math.sin(self.a), math.cos(self.a) * self.b)

    def cos(self) -> Dual:
        return Dual(math.cos(self.a), -math.sin(self.a) * self.b)

    def exp(self) -> Dual:
        e = math.exp(self.a)
        return Dual(e, e * self.b)

    def log(self) -> Dual:
        return Dual(math.log(self.a), self.b / self.a)

    def sqrt(self) -> Dual:
        r = math.sqrt(self.a)
        return Dual(r, self.b / (2.0 * r))

    def abs(self) -> Dual:
        # subgradient 0 at the kink
        s = (self.a > 0) - (self.a < 0)
        return Dual(abs(self.a), s * self.b)


def derivative(f, x0: float) -> float:
    """Derivative of a scalar function at ``x0`` by one seeded dual pass."""
    return f(Dual(x0, 1.0)).b
