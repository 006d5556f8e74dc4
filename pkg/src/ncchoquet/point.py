"""Level-n points of an nc convex set and the three nc-convexity operations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances, as_cmat, is_hermitian


@dataclass(frozen=True, eq=False)
class NcPoint:
    """A d-tuple of n x n complex matrices."""

    mats: tuple

    def __init__(self, mats):
        arrs = tuple(as_cmat(m) for m in mats)
        if not arrs:
            raise ValueError("an NcPoint needs at least one matrix")
        n = arrs[0].shape[0]
        for m in arrs:
            if m.shape != (n, n):
                raise ValueError("NcPoint matrices must be square and share one size")
        for m in arrs:
            m.setflags(write=False)
        object.__setattr__(self, "mats", arrs)

    @classmethod
    def scalar(cls, *values) -> "NcPoint":
        return cls([np.array([[v]]) for v in values])

    @property
    def d(self) -> int:
        return len(self.mats)

    @property
    def level(self) -> int:
        return self.mats[0].shape[0]

    def adjoint_mats(self):
        return tuple(m.conj().T for m in self.mats)

    def is_hermitian(self, eps: float = 1e-8) -> bool:
        return all(is_hermitian(m, eps) for m in self.mats)

    def conj_by(self, u: np.ndarray) -> "NcPoint":
        """u x u* (u need not be square: u x u* lives at level rows(u))."""
        return NcPoint([u @ m @ u.conj().T for m in self.mats])

    def allclose(self, other: "NcPoint", atol: float = 1e-8) -> bool:
        if self.d != other.d or self.level != other.level:
            return False
        return all(np.allclose(a, b, atol=atol, rtol=0) for a, b in zip(self.mats, other.mats))

    def __repr__(self):
        return f"NcPoint(d={self.d}, level={self.level})"


def direct_sum(points: Sequence[NcPoint]) -> NcPoint:
    points = list(points)
    if not points:
        raise ValueError("direct_sum of an empty list")
    d = points[0].d
    if any(p.d != d for p in points):
        raise ValueError("direct_sum needs points with a common generator count")
    n = sum(p.level for p in points)
    mats = []
    for j in range(d):
        m = np.zeros((n, n), dtype=complex)
        at = 0
        for p in points:
            k = p.level
            m[at:at + k, at:at + k] = p.mats[j]
            at += k
        mats.append(m)
    return NcPoint(mats)


def compress(x: NcPoint, v) -> NcPoint:
    """v* x v; compress(x, v).level == cols(v)."""
    v = as_cmat(v)
    if v.shape[0] != x.level:
        raise ValueError(f"compression matrix has {v.shape[0]} rows, point has level {x.level}")
    return NcPoint([v.conj().T @ m @ v for m in x.mats])


def nc_combination(points: Sequence[NcPoint], weights, tol: Tolerances = DEFAULT_TOL) -> NcPoint:
    """sum_i a_i* x_i a_i with a_i in M_{n_i, n} and sum_i a_i* a_i = I_n."""
    points = list(points)
    weights = [as_cmat(a) for a in weights]
    if len(points) != len(weights) or not points:
        raise ValueError("need one weight per point")
    n = weights[0].shape[1]
    total = np.zeros((n, n), dtype=complex)
    for p, a in zip(points, weights):
        if a.shape != (p.level, n):
            raise ValueError(f"weight of shape {a.shape} does not fit a level-{p.level} point and level-{n} output")
        total += a.conj().T @ a
    if np.max(np.abs(total - np.eye(n))) > tol.eps_eq:
        raise ValueError("weights do not satisfy sum a_i* a_i = I")
    d = points[0].d
    if any(p.d != d for p in points):
        raise ValueError("points must share the generator count")
    mats = []
    for j in range(d):
        mats.append(sum(a.conj().T @ p.mats[j] @ a for p, a in zip(points, weights)))
    return NcPoint(mats)


def block_embedding(levels: Sequence[int], which: int) -> np.ndarray:
    """Canonical isometry of the `which`-th summand into a direct sum."""
    n = sum(levels)
    start = sum(levels[:which])
    v = np.zeros((n, levels[which]), dtype=complex)
    v[start:start + levels[which], :] = np.eye(levels[which])
    return v
