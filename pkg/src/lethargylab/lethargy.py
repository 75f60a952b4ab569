"""Constructive sequence machinery.

Two things live here: the jump-controlled dominating sequence (given a jump
map h with h(n) >= n and a non-increasing positive prefix eps, build xi with
xi_n >= eps_n, xi_n <= 2 xi_h(n), xi non-increasing), and exact-error
elements for the coordinate subspace chains Pi_n in c0 and l2: sequences
whose best-approximation error curve over Pi_n equals a prescribed eps
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Sequence, Tuple, Union

import numpy as np

from .core import L2, SUP, RealSeq

__all__ = [
    "JumpFn",
    "DominatedSeq",
    "normalize_jump",
    "build_a",
    "build_xi",
    "bernstein_c0",
    "bernstein_l2",
    "coordinate_errors_sup",
    "coordinate_errors_l2",
]


class JumpFn:
    """Map h: N -> N with h(n) >= n, wrapping either a closure or a table."""

    def __init__(self, h: Union[Callable[[int], int], Sequence[int], np.ndarray]):
        if callable(h):
            self._fn = h
            self._table = None
        else:
            self._fn = None
            self._table = np.asarray(h, dtype=np.int64)
            if self._table.ndim != 1:
                raise ValueError("jump table must be one-dimensional")

    def __call__(self, n: int) -> int:
        if self._table is not None:
            if not 0 <= n < len(self._table):
                raise IndexError(f"jump table has no entry for n={n}")
            return int(self._table[n])
        return int(self._fn(n))

    def table(self, n_last: int) -> np.ndarray:
        """Values h(0..n_last) as an int array."""
        if self._table is not None:
            if len(self._table) <= n_last:
                raise IndexError(f"jump table too short for n_last={n_last}")
            return self._table[: n_last + 1].copy()
        return np.array([int(self._fn(n)) for n in range(n_last + 1)], dtype=np.int64)


def _require_admissible(h_values: np.ndarray) -> None:
    ns = np.arange(len(h_values))
    bad = h_values < ns
    if bad.any():
        n = int(np.argmax(bad))
        raise ValueError(f"h({n}) = {int(h_values[n])} < {n}; need h(n) >= n")


def normalize_jump(h: JumpFn, n_last: int) -> JumpFn:
    """Strictly increasing majorant h*(n) = max{h(0), ..., h(n)} + n.

    h* dominates h pointwise, is strictly increasing, and has h*(1) > 1,
    which is exactly what the block construction of build_a needs.
    """
    values = h.table(n_last)
    _require_admissible(values)
    return JumpFn(np.maximum.accumulate(values) + np.arange(n_last + 1))


def build_a(hstar: JumpFn, n_last: int) -> np.ndarray:
    """Block-constant sequence: a_n = 1 on {0,1}, 2**-s on [h*^s(1), h*^{s+1}(1)).

    Blocks are truncated at n_last; by construction a is non-increasing,
    takes values in (0,1], and satisfies a_n = 2 a_{h*(n)} wherever the
    target block is in range.
    """
    a = np.empty(n_last + 1, dtype=float)
    a[0] = 1.0
    if n_last == 0:
        return a
    if hstar(1) <= 1:
        raise ValueError("h*(1) must exceed 1; run normalize_jump first")
    t, s = 1, 0
    while t <= n_last:
        nxt = hstar(t)
        if nxt <= t:
            raise ValueError(f"h* iterate stalled at {t}; h* must be strictly increasing")
        a[t : min(nxt, n_last + 1)] = 2.0 ** -s
        t, s = nxt, s + 1
    return a


@dataclass(frozen=True)
class DominatedSeq:
    """Result of build_xi: xi dominates eps and obeys the factor-2 jump control."""

    xi: Tuple[float, ...]
    source_eps: Tuple[float, ...]
    h: JumpFn

    def check(self, tol: float = 0.0) -> Dict[str, bool]:
        """Invariant report; 'jump' is asserted wherever h(n) is in range."""
        xi = np.asarray(self.xi)
        eps = np.asarray(self.source_eps)
        n_last = len(xi) - 1
        hv = self.h.table(n_last)
        in_range = hv <= n_last
        idx = np.nonzero(in_range)[0]
        report = {
            "dominates": bool((xi >= eps - tol).all()),
            "jump": bool((xi[idx] <= 2.0 * xi[hv[idx]] + tol).all()),
            "monotone": bool((np.diff(xi) <= tol).all()),
            "positive": bool((xi > 0.0).all()),
        }
        report["all_ok"] = all(report.values())
        return report


def build_xi(eps: Sequence[float], h: JumpFn) -> DominatedSeq:
    """Run the dominating-sequence recursion on a finite prefix.

    With a from build_a (via the normalized jump h*) and b_n = max(a_n, eps_n):
    xi_0 = b_0 and xi_{n+1} = xi_n unless xi_n - b_{n+1} >= a_n - a_{n+1},
    in which case xi drops by exactly a_n - a_{n+1}.  The boundary case of
    equality takes the drop, matching the weak inequality of the recursion.
    """
    e = np.asarray(eps, dtype=float)
    if e.ndim != 1 or len(e) == 0:
        raise ValueError("eps must be a non-empty 1-D prefix")
    if (e <= 0.0).any():
        raise ValueError("eps must be strictly positive")
    if (np.diff(e) > 0.0).any():
        raise ValueError("eps must be non-increasing")
    n_last = len(e) - 1
    hstar = normalize_jump(h, n_last)
    a = build_a(hstar, n_last)
    b = np.maximum(a, e)
    xi = np.empty_like(b)
    xi[0] = b[0]
    for n in range(n_last):
        drop = a[n] - a[n + 1]
        if xi[n] - b[n + 1] < drop:
            xi[n + 1] = xi[n]
        else:
            xi[n + 1] = xi[n] - drop
    return DominatedSeq(tuple(xi), tuple(e), h)


def coordinate_errors_sup(x: RealSeq) -> np.ndarray:
    """E(x, Pi_n) for n = 0..len(x) in c0: suffix sup of |x_k|, k > n."""
    v = np.abs(x.as_array())
    out = np.zeros(len(v) + 1)
    if len(v):
        out[:-1] = np.maximum.accumulate(v[::-1])[::-1]
    return out


def coordinate_errors_l2(x: RealSeq) -> np.ndarray:
    """E(x, Pi_n) for n = 0..len(x) in l2: suffix Euclidean tail."""
    v = np.asarray(x.values, dtype=float) ** 2
    out = np.zeros(len(v) + 1)
    if len(v):
        out[:-1] = np.cumsum(v[::-1])[::-1]
    return np.sqrt(out)


def _check_eps_prefix(eps: Sequence[float]) -> np.ndarray:
    e = np.asarray(eps, dtype=float)
    if e.ndim != 1 or len(e) == 0:
        raise ValueError("eps must be a non-empty 1-D prefix")
    if (e < 0.0).any():
        raise ValueError("eps must be non-negative")
    if (np.diff(e) > 0.0).any():
        raise ValueError("eps must be non-increasing")
    return e


def bernstein_c0(eps: Sequence[float]) -> RealSeq:
    """Element of c0 with E(x, Pi_n) = eps_n exactly: x_k = eps_{k-1}.

    The tail sup past coordinate n is eps_n because eps is non-increasing.
    """
    e = _check_eps_prefix(eps)
    return RealSeq(tuple(e), SUP)


def bernstein_l2(eps: Sequence[float]) -> RealSeq:
    """Element of l2 with E(x, Pi_n) = eps_n exactly.

    x_k = sqrt(eps_{k-1}^2 - eps_k^2) with eps extended by a final 0, so the
    squared l2 tail past n telescopes to eps_n^2.  Trailing zero coordinates
    are stripped.
    """
    e = _check_eps_prefix(eps)
    ext = np.append(e, 0.0)
    gaps = ext[:-1] ** 2 - ext[1:] ** 2
    x = np.sqrt(np.maximum(gaps, 0.0))
    last = len(x)
    while last > 0 and x[last - 1] == 0.0:
        last -= 1
    return RealSeq(tuple(x[:last]), L2)
