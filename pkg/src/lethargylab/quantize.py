"""Quantization cones in c0: sequences taking at most n distinct values.

A c0 sequence with finitely many distinct values is eventually exactly 0,
so 0 always belongs to the level set of an approximant; that makes the
exact best error a 1-D covering problem with a forced center at 0.  The
nearest-level ladder construction gives the 2M/n upper bound, and the
scheme collapses: n * E(x, A_n) stays bounded, so no error sequence can be
prescribed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .core import ErrorCurve, Kind, RealSeq, SUP, SchemeDescriptor, norm

__all__ = [
    "LevelSet",
    "QuantResult",
    "CollapseProfile",
    "quantize_ladder",
    "quantize_exact",
    "collapse_profile",
    "scheme",
]


@dataclass(frozen=True)
class LevelSet:
    levels: Tuple[float, ...]
    contains_zero: bool


@dataclass(frozen=True)
class QuantResult:
    approximant: RealSeq
    levels: LevelSet
    error: float
    kind: Kind


def _require_sup(x: RealSeq) -> np.ndarray:
    if x.norm_tag != SUP:
        raise ValueError("quantization lives in c0; expected a SUP-tagged sequence")
    return x.as_array()


def _result(x: np.ndarray, approx: np.ndarray, kind: Kind) -> QuantResult:
    levels = sorted(set(approx.tolist()) | {0.0})
    error = float(np.max(np.abs(x - approx))) if len(x) else 0.0
    return QuantResult(
        approximant=RealSeq(tuple(approx), SUP),
        levels=LevelSet(tuple(levels), True),
        error=error,
        kind=kind,
    )


def quantize_ladder(x: RealSeq, n: int) -> QuantResult:
    """Ladder construction: levels c_k = M - k*2M/n, k = 1..n-1, plus the
    forced 0 for the tail; coordinates below the 2M/n threshold are zeroed.

    The achieved error is recomputed; it is an upper bound for E(x, A_n)
    and never exceeds 2M/n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    v = _require_sup(x)
    big = float(np.max(np.abs(v))) if len(v) else 0.0
    if big == 0.0:
        return _result(v, np.zeros_like(v), Kind.UPPER_BOUND)
    step = 2.0 * big / n
    ladder = np.array([big - k * step for k in range(1, n)])
    approx = np.zeros_like(v)
    keep = np.abs(v) >= step
    if len(ladder) and keep.any():
        nearest = np.argmin(np.abs(v[keep, None] - ladder[None, :]), axis=1)
        approx[keep] = ladder[nearest]
    return _result(v, approx, Kind.UPPER_BOUND)


def _cover_groups(points: List[float], radius: float) -> List[Tuple[float, float]]:
    """Greedy left-to-right grouping of sorted points into intervals of
    half-length radius; returns (lo, hi) per group."""
    groups = []
    i = 0
    while i < len(points):
        j = i
        while j + 1 < len(points) and points[j + 1] - points[i] <= 2.0 * radius:
            j += 1
        groups.append((points[i], points[j]))
        i = j + 1
    return groups


def _feasible(points: List[float], radius: float, free_levels: int) -> bool:
    outside = [p for p in points if abs(p) > radius]
    return len(_cover_groups(outside, radius)) <= free_levels


def quantize_exact(x: RealSeq, n: int) -> QuantResult:
    """Exact E(x, A_n) in the sup norm.

    Minimizes over level sets V with |V| <= n and 0 in V the quantity
    max_k min_{v in V} |x_k - v|.  The optimal radius lies in the finite
    set {0} u {|x_k|} u {|x_i - x_j| / 2}: a group served by the forced
    center 0 costs some |x_k|, a group served by a free level costs a
    half-gap.  Binary search over that set with greedy interval covering
    is therefore exact.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    v = _require_sup(x)
    points = sorted(set(v.tolist()) | {0.0})
    if len(points) <= n:
        return _result(v, v.copy(), Kind.EXACT)
    cands = {0.0}
    cands.update(abs(p) for p in points)
    cands.update((b - a) / 2.0 for i, a in enumerate(points) for b in points[i + 1 :])
    cands = sorted(cands)
    free = n - 1
    lo, hi = 0, len(cands) - 1
    if not _feasible(points, cands[hi], free):
        raise RuntimeError("covering with the full candidate radius failed")  # unreachable
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(points, cands[mid], free):
            hi = mid
        else:
            lo = mid + 1
    radius = cands[lo]
    outside = [p for p in points if abs(p) > radius]
    levels = [0.0] + [(a + b) / 2.0 for a, b in _cover_groups(outside, radius)]
    larr = np.array(levels)
    approx = larr[np.argmin(np.abs(v[:, None] - larr[None, :]), axis=1)] if len(v) else v.copy()
    return _result(v, approx, Kind.EXACT)


@dataclass(frozen=True)
class CollapseProfile:
    curve: ErrorCurve
    sup_n_times_error: float
    envelope_bound: float  # 2 * ||x||_sup
    envelope_holds: bool


def collapse_profile(x: RealSeq, n_max: int) -> CollapseProfile:
    """Exact error curve n = 1..n_max together with the n*E <= 2M envelope."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    v = _require_sup(x)
    big = float(np.max(np.abs(v))) if len(v) else 0.0
    entries = []
    worst = 0.0
    for n in range(1, n_max + 1):
        err = quantize_exact(x, n).error
        entries.append((n, err, Kind.EXACT))
        worst = max(worst, n * err)
    return CollapseProfile(
        curve=ErrorCurve(tuple(entries)),
        sup_n_times_error=worst,
        envelope_bound=2.0 * big,
        envelope_holds=worst <= 2.0 * big + 1e-12,
    )


def scheme() -> SchemeDescriptor:
    """The quantization scheme; A_n + A_n lands in A_{n^2}, so K(n) = n**2."""

    def error_fn(x, n):
        if n == 0:
            return norm(x), Kind.EXACT
        return quantize_exact(x, n).error, Kind.EXACT

    return SchemeDescriptor("quantization", lambda n: max(n * n, 1), error_fn)
