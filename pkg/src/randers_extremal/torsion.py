"""Skew-symmetric (1,2)-tensors at a point and their block layout.

Components ``T^c_ab`` are stored for ``a < b`` only. Blocks are labelled by the
lower pair ``(a, b)``: front blocks (``b < n``) come first in lexicographic
order, then the rear blocks ``(a, n)``. Inside a block the components are
ordered by ``c``. For n = 4 the 24 slots read::

    (1,2) (1,3) (2,3) | (1,4) (2,4) (3,4)      each block: c = 1, 2, 3 | 4

All indices in code are 0-based; docstrings use the 1-based labels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Optional

import numpy as np


class SlotKind(enum.Enum):
    FRONT_SHORT = "front-short"
    FRONT_TAIL = "front-tail"
    REAR_DIAGONAL = "rear-short-diagonal"
    REAR_OFFDIAGONAL = "rear-short-offdiagonal"
    REAR_TAIL = "rear-tail"


@dataclass(frozen=True)
class Slot:
    a: int
    b: int
    c: int
    kind: SlotKind

    @property
    def label(self) -> str:
        return f"T_{self.a + 1}{self.b + 1}^{self.c + 1}"


def unknown_count(n: int) -> int:
    """Number of independent torsion components, ``n * C(n, 2)``."""
    return n * comb(n, 2)


def appearing_count(n: int) -> int:
    """Components outside the front short blocks, ``(n-1)(3n-2)/2``."""
    return comb(n - 1, 2) + (n - 1) * n


def free_dimension(n: int) -> int:
    """Dimension of the affine solution space, ``n * C(n-1, 2)``."""
    return n * comb(n - 1, 2)


def _classify(a: int, b: int, c: int, n: int) -> SlotKind:
    last = n - 1
    if b < last:
        return SlotKind.FRONT_TAIL if c == last else SlotKind.FRONT_SHORT
    if c == last:
        return SlotKind.REAR_TAIL
    return SlotKind.REAR_DIAGONAL if c == a else SlotKind.REAR_OFFDIAGONAL


@lru_cache(maxsize=None)
def layout(n: int) -> tuple[Slot, ...]:
    """Ordered slots of the flat component vector."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    front = [(a, b) for a in range(n - 1) for b in range(a + 1, n - 1)]
    rear = [(a, n - 1) for a in range(n - 1)]
    return tuple(
        Slot(a, b, c, _classify(a, b, c, n)) for a, b in front + rear for c in range(n)
    )


@lru_cache(maxsize=None)
def slot_index(n: int) -> dict:
    """Map ``(a, b, c)`` with ``a < b`` to the flat position."""
    return {(s.a, s.b, s.c): k for k, s in enumerate(layout(n))}


def kind_mask(n: int, kind: SlotKind) -> np.ndarray:
    return np.array([s.kind is kind for s in layout(n)])


@dataclass(frozen=True, eq=False)
class TorsionTensor:
    """Torsion components at a point in some basis (chart or adapted).

    ``compatible`` is ``None`` unless the tensor came from the closed-form
    extremal formulas, where ``False`` marks a point at which the formulas
    do not solve the compatibility equations.
    """

    n: int
    components: np.ndarray
    compatible: Optional[bool] = field(default=None, compare=False)

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float)
        if comp.shape != (unknown_count(self.n),):
            raise ValueError(
                f"expected {unknown_count(self.n)} components for n={self.n}, got {comp.shape}"
            )
        comp.setflags(write=False)
        object.__setattr__(self, "components", comp)

    @classmethod
    def zeros(cls, n: int) -> "TorsionTensor":
        return cls(n, np.zeros(unknown_count(n)))

    @classmethod
    def from_full(cls, full: np.ndarray, **kwargs) -> "TorsionTensor":
        """From a dense array ``full[c, a, b] = T^c_ab`` (skew in a, b)."""
        full = np.asarray(full, dtype=float)
        n = full.shape[0]
        comp = np.array([full[s.c, s.a, s.b] for s in layout(n)])
        return cls(n, comp, **kwargs)

    def to_full(self) -> np.ndarray:
        """Dense ``full[c, a, b]`` with ``full[c, b, a] = -full[c, a, b]``."""
        n = self.n
        full = np.zeros((n, n, n))
        for s, v in zip(layout(n), self.components):
            full[s.c, s.a, s.b] = v
            full[s.c, s.b, s.a] = -v
        return full

    def get(self, a: int, b: int, c: int) -> float:
        """``T^c_ab`` for any ordered pair, using skew-symmetry."""
        if a == b:
            return 0.0
        if a < b:
            return float(self.components[slot_index(self.n)[(a, b, c)]])
        return -float(self.components[slot_index(self.n)[(b, a, c)]])

    def norm(self) -> float:
        """Euclidean norm of the stored components (orthonormal bases only)."""
        return float(np.linalg.norm(self.components))

    def blocks(self) -> dict:
        """Components grouped by slot kind, in layout order."""
        out = {k: [] for k in SlotKind}
        for s, v in zip(layout(self.n), self.components):
            out[s.kind].append(float(v))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorsionTensor):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.components, other.components))

    __hash__ = None

    def __add__(self, other: "TorsionTensor") -> "TorsionTensor":
        return TorsionTensor(self.n, self.components + other.components)

    def __sub__(self, other: "TorsionTensor") -> "TorsionTensor":
        return TorsionTensor(self.n, self.components - other.components)


def transform(T: TorsionTensor, B: np.ndarray) -> TorsionTensor:
    """Components in the basis whose vectors are the columns of ``B``.

    ``Tbar^c_ab = (B^-1)^c_k B^i_a B^j_b T^k_ij``.
    """
    B = np.asarray(B, dtype=float)
    Binv = np.linalg.inv(B)
    full = np.einsum("ck,ia,jb,kij->cab", Binv, B, B, T.to_full())
    return TorsionTensor.from_full(full, compatible=T.compatible)


def metric_norm(T: TorsionTensor, metric: np.ndarray) -> float:
    """Torsion norm induced by a Riemannian metric, for chart components.

    Equal to :meth:`TorsionTensor.norm` of the components in any
    metric-orthonormal basis.
    """
    g = np.asarray(metric, dtype=float)
    ginv = np.linalg.inv(g)
    full = T.to_full()
    sq = 0.5 * np.einsum("kij,lpq,kl,ip,jq->", full, full, g, ginv, ginv)
    return float(np.sqrt(max(sq, 0.0)))
