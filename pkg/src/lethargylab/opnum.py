"""Approximation numbers of dense real matrices.

In the Euclidean operator norm the n-th approximation number (distance to
the operators of rank < n) equals the n-th singular value, and the
projection jump inequality a_{floor(n/2)}(P) <= ||P||^2 a_n(P) is a cheap
but nontrivial check for oblique projections, whose norm exceeds 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import ErrorCurve, Kind, SchemeDescriptor

__all__ = [
    "MatrixOp",
    "approx_numbers",
    "best_rank_residual",
    "projection_jump",
    "oblique_projection",
    "scheme",
]


@dataclass(frozen=True)
class MatrixOp:
    """Dense real matrix viewed as an operator between Euclidean spaces."""

    entries: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("entries must form a non-empty 2-D matrix")
        if not np.isfinite(arr).all():
            raise ValueError("matrix entries must be finite")
        object.__setattr__(self, "entries", tuple(tuple(row) for row in arr))

    @classmethod
    def from_array(cls, arr) -> "MatrixOp":
        return cls(tuple(tuple(float(v) for v in row) for row in np.asarray(arr)))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)


def _singular_values(arr: np.ndarray) -> np.ndarray:
    return np.linalg.svd(arr, compute_uv=False)


def approx_numbers(op: MatrixOp, n_max: int) -> ErrorCurve:
    """a_n(T) for n = 1..n_max: the n-th singular value, 0 past the rank."""
    arr = op.array
    limit = min(arr.shape) + 1
    if not 1 <= n_max <= limit:
        raise ValueError(f"n_max must be in 1..{limit}")
    s = _singular_values(arr)
    entries = []
    for n in range(1, n_max + 1):
        value = float(s[n - 1]) if n <= len(s) else 0.0
        entries.append((n, value, Kind.EXACT))
    return ErrorCurve(tuple(entries))


def best_rank_residual(op: MatrixOp, rank: int) -> float:
    """Spectral-norm distance from T to its best approximation of the given
    rank, recomputed from the truncated factorization (not read off the
    spectrum)."""
    arr = op.array
    u, s, vt = np.linalg.svd(arr)
    trunc = (u[:, :rank] * s[:rank]) @ vt[:rank]
    return float(np.linalg.norm(arr - trunc, 2))


def projection_jump(op: MatrixOp, n: int) -> Tuple[float, float, float]:
    """(a_{floor(n/2)}(P), ||P||, a_n(P)) for a rank-n idempotent P.

    The index floor(n/2) is clamped to 1 so rank-1 projections are handled
    (a_0 would be a distance to an empty set).  Raises if the inequality
    a_{floor(n/2)} <= ||P||^2 a_n fails, which a genuine projection cannot do.
    """
    arr = op.array
    if arr.shape[0] != arr.shape[1]:
        raise ValueError("projections must be square")
    if np.abs(arr @ arr - arr).max() > 1e-10:
        raise ValueError("matrix is not idempotent within 1e-10")
    if n < 1:
        raise ValueError("rank must be >= 1")
    if np.linalg.matrix_rank(arr) != n:
        raise ValueError(f"matrix rank is not {n}")
    s = _singular_values(arr)
    a_half = float(s[max(n // 2, 1) - 1])
    op_norm = float(s[0])
    a_n = float(s[n - 1])
    if a_half > op_norm ** 2 * a_n * (1.0 + 1e-9) + 1e-12:
        raise RuntimeError("projection jump inequality violated")  # unreachable for projections
    return a_half, op_norm, a_n


def oblique_projection(onto: np.ndarray, along_complement_of: np.ndarray) -> MatrixOp:
    """Projection with range span(onto) annihilating the orthogonal complement
    of span(along_complement_of): P = X (Y^T X)^{-1} Y^T for column blocks X, Y."""
    x = np.atleast_2d(np.asarray(onto, dtype=float))
    y = np.atleast_2d(np.asarray(along_complement_of, dtype=float))
    if x.shape != y.shape:
        raise ValueError("column blocks must have matching shapes")
    gram = y.T @ x
    return MatrixOp.from_array(x @ np.linalg.solve(gram, y.T))


def scheme() -> SchemeDescriptor:
    """Finite-rank approximation of operators; rank subadditivity gives K(n) = 2n."""

    def error_fn(op, n):
        arr = op.array
        if n == 0:
            return float(np.linalg.norm(arr, 2)), Kind.EXACT
        s = _singular_values(arr)
        value = float(s[n - 1]) if n <= len(s) else 0.0
        return value, Kind.EXACT

    return SchemeDescriptor("finite-rank", lambda n: 2 * n, error_fn)
