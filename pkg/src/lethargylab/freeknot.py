"""Free-knot piecewise-constant approximation in the sup norm.

Best fits with at most m contiguous pieces use the midrange value per piece
(for a fixed piece the midrange minimizes the sup deviation, with error
half the range).  Small grids are solved exactly over the finite set of
candidate radii; large grids use radius bisection.  Both paths share a
greedy maximal-extension feasibility check accelerated by doubling jumps
over sparse range-min/max tables.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .core import Kind, SchemeDescriptor, StepFn

__all__ = [
    "PiecewiseConst",
    "IntervalTerm",
    "canonicalize",
    "best_pc_sup",
    "equioscillation_witness",
    "sample_fn",
    "sample_sin",
    "scheme",
    "witness_fn",
]

_EXACT_CANDIDATE_LIMIT = 512


@dataclass(frozen=True)
class PiecewiseConst:
    """Step function on [0,1] given by interior breakpoints and per-piece values."""

    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]
    canonical: bool = True

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if any(not 0.0 < b < 1.0 for b in bps):
            raise ValueError("breakpoints must lie strictly inside (0,1)")
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(vals) != len(bps) + 1:
            raise ValueError("need exactly one value per piece")
        if self.canonical and any(u == w for u, w in zip(vals, vals[1:])):
            raise ValueError("adjacent equal values in a canonical PiecewiseConst")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    def __call__(self, t: float) -> float:
        return self.values[bisect.bisect_right(self.breakpoints, t)]


@dataclass(frozen=True)
class IntervalTerm:
    """Scaled characteristic function of a non-degenerate interval of [0,1]."""

    coefficient: float
    interval: Tuple[float, float]

    def __post_init__(self):
        a, b = (float(self.interval[0]), float(self.interval[1]))
        if not 0.0 <= a < b <= 1.0:
            raise ValueError(f"degenerate or out-of-range interval [{a}, {b}]")
        object.__setattr__(self, "interval", (a, b))
        object.__setattr__(self, "coefficient", float(self.coefficient))


def _merged(breaks: List[float], vals: List[float]) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    out_b: List[float] = []
    out_v: List[float] = [vals[0]]
    for b, v in zip(breaks, vals[1:]):
        if v != out_v[-1]:
            out_b.append(b)
            out_v.append(v)
    return tuple(out_b), tuple(out_v)


def canonicalize(terms: List[IntervalTerm]) -> PiecewiseConst:
    """Exact step representation of sum c_k chi_{I_k}; adjacent equal pieces merged.

    Interval endpoints carry no mass, so values are taken on open cells.
    The result has at most 2*len(terms) interior breakpoints.
    """
    if not terms:
        raise ValueError("need at least one term")
    cuts = {0.0, 1.0}
    for term in terms:
        cuts.update(term.interval)
    edges = sorted(cuts)
    vals = []
    for u, w in zip(edges, edges[1:]):
        mid = (u + w) / 2.0
        vals.append(sum(t.coefficient for t in terms if t.interval[0] < mid < t.interval[1]))
    breaks, vals = _merged(edges[1:-1], vals)
    return PiecewiseConst(breaks, vals)


def _range_tables(v: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    tmin, tmax = [v], [v]
    step = 1
    while 2 * step <= len(v):
        tmin.append(np.minimum(tmin[-1][:-step], tmin[-1][step:]))
        tmax.append(np.maximum(tmax[-1][:-step], tmax[-1][step:]))
        step *= 2
    return tmin, tmax


def _greedy_boundaries(v: np.ndarray, tmin, tmax, radius: float, limit: int) -> List[int]:
    """Greedy maximal pieces with range <= 2*radius; stops after limit pieces.

    Each piece is extended by doubling jumps over the sparse tables: trying
    powers of two in decreasing order reconstructs the maximal extension,
    since the range of a window only grows with its length.  Returns
    boundaries [0, b1, ..., n] if within limit, else a partial list longer
    than limit.
    """
    n = len(v)
    cap = 2.0 * radius
    bounds = [0]
    pos = 0
    while pos < n:
        lo = hi = float(v[pos])
        end = pos + 1
        for k in range(len(tmin) - 1, -1, -1):
            step = 1 << k
            if end + step > n:
                continue
            nlo = min(lo, float(tmin[k][end]))
            nhi = max(hi, float(tmax[k][end]))
            if nhi - nlo <= cap:
                lo, hi, end = nlo, nhi, end + step
        bounds.append(end)
        pos = end
        if len(bounds) - 1 > limit:
            break
    return bounds


def _feasible(v: np.ndarray, tmin, tmax, radius: float, pieces: int) -> bool:
    bounds = _greedy_boundaries(v, tmin, tmax, radius, pieces)
    return bounds[-1] == len(v) and len(bounds) - 1 <= pieces


def best_pc_sup(f: StepFn, pieces: int) -> Tuple[PiecewiseConst, float]:
    """Minimax fit of f by at most `pieces` contiguous constant pieces.

    Exact on the grid: the optimal sup error is half the range of some
    contiguous cell block, so for small grids we binary-search the explicit
    candidate set; for large grids we bisect on the radius and return the
    recomputed error of the reconstructed partition.
    """
    if pieces < 1:
        raise ValueError("piece count must be >= 1")
    v = f.as_array()
    n = len(v)
    tmin, tmax = _range_tables(v)
    full_radius = float(v.max() - v.min()) / 2.0
    if full_radius == 0.0 or pieces >= n:
        radius = 0.0
    elif n <= _EXACT_CANDIDATE_LIMIT:
        cands = {0.0}
        for i in range(n):
            cmax = np.maximum.accumulate(v[i:])
            cmin = np.minimum.accumulate(v[i:])
            cands.update(((cmax - cmin) / 2.0).tolist())
        arr = sorted(cands)
        lo, hi = 0, len(arr) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if _feasible(v, tmin, tmax, arr[mid], pieces):
                hi = mid
            else:
                lo = mid + 1
        radius = arr[lo]
    else:
        lo, hi = 0.0, full_radius
        if _feasible(v, tmin, tmax, lo, pieces):
            radius = lo
        else:
            for _ in range(100):
                mid = (lo + hi) / 2.0
                if mid == lo or mid == hi:
                    break
                if _feasible(v, tmin, tmax, mid, pieces):
                    hi = mid
                else:
                    lo = mid
            radius = hi
    bounds = _greedy_boundaries(v, tmin, tmax, radius, pieces)
    if bounds[-1] != n or len(bounds) - 1 > pieces:
        raise RuntimeError("greedy reconstruction failed at the optimal radius")  # unreachable
    piece_vals = []
    error = 0.0
    for a, b in zip(bounds, bounds[1:]):
        block = v[a:b]
        lo_v, hi_v = float(block.min()), float(block.max())
        piece_vals.append((lo_v + hi_v) / 2.0)
        error = max(error, (hi_v - lo_v) / 2.0)
    breaks = [b / n for b in bounds[1:-1]]
    breaks, piece_vals = _merged(breaks, piece_vals)
    return PiecewiseConst(breaks, piece_vals), error


def sample_fn(fn: Callable[[float], float], grid_log2: int) -> StepFn:
    """Sample a function at cell midpoints into a sup-norm StepFn."""
    n = 2 ** grid_log2
    t = (np.arange(n) + 0.5) / n
    return StepFn(grid_log2, tuple(float(fn(u)) for u in t), math.inf)


def sample_sin(multiplier: int, grid_log2: int) -> StepFn:
    """sin(multiplier * pi * t) sampled at cell midpoints (vectorized)."""
    n = 2 ** grid_log2
    t = (np.arange(n) + 0.5) / n
    return StepFn(grid_log2, tuple(np.sin(multiplier * np.pi * t)), math.inf)


def witness_fn(n: int, grid_log2: int) -> StepFn:
    """The oscillation witness for index n: sin(h*pi*t) with h = 4(8n+4),
    so every piece of length >= 1/(8n+4) contains full periods."""
    h = 4 * (8 * n + 4)
    if 2 ** grid_log2 < 4 * h:
        raise ValueError(f"grid_log2={grid_log2} too coarse for oscillation {h}")
    return sample_sin(h, grid_log2)


def equioscillation_witness(n: int, grid_log2: int) -> Tuple[float, float]:
    """Best errors of the oscillation witness with 4n+3 and 8n+5 pieces.

    Both are 1 up to the sampling error pi*h/2**grid_log2: any candidate
    piece still contains a full oscillation, so no piecewise-constant fit
    can beat the trivial zero fit.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    f = witness_fn(n, grid_log2)
    e1 = best_pc_sup(f, 4 * n + 3)[1]
    e2 = best_pc_sup(f, 8 * n + 5)[1]
    return e1, e2


def scheme() -> SchemeDescriptor:
    """Free-knot scheme A_n = splines with 4n+2 free knots (4n+3 pieces).

    A_n + A_n lives in splines with 8n+4 knots, contained in A_{2n+1}.
    Errors are grid-exact for StepFn inputs.
    """

    def error_fn(f, n):
        return best_pc_sup(f, 4 * n + 3)[1], Kind.EXACT

    return SchemeDescriptor("freeknot", lambda n: 2 * n + 1, error_fn)
