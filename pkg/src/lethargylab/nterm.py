"""n-term approximation with dictionaries.

Exact best n-term errors for orthonormal coordinate systems, greedy partial
sums with deterministic tie-breaking, the dyadic Haar system realized as
step functions with unit L^p norm, and democracy-ratio diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

import numpy as np

from .core import (
    Kind,
    L2,
    RealSeq,
    SchemeDescriptor,
    StepFn,
    lp_norm,
    norm,
)

__all__ = [
    "ORTHONORMAL_COORD",
    "HAAR_P",
    "Dictionary",
    "GreedyResult",
    "sigma_n_orthonormal",
    "greedy",
    "haar",
    "haar_matrix",
    "haar_coefficients",
    "democracy_ratio",
    "jump_witness_nterm",
    "coord_scheme",
    "coord_witness",
]

ORTHONORMAL_COORD = "coord"
HAAR_P = "haar"


def _haar_level(k: int) -> Tuple[int, int]:
    """Split k >= 2 as 2**j + t with 1 <= t <= 2**j."""
    j = (k - 1).bit_length() - 1
    return j, k - 2 ** j


def haar(k: int, grid_log2: int, p: float = 2.0) -> StepFn:
    """k-th Haar function on the dyadic grid, normalized to unit L^p norm.

    k = 1 is the constant function 1 (the standard completion of the wavelet
    blocks); k = 2**j + t with 1 <= t <= 2**j is supported on
    [(t-1)/2**j, t/2**j], positive on the left half, with amplitude 2**(j/p).
    """
    if k < 1:
        raise ValueError("haar index must be >= 1")
    g = grid_log2
    n_cells = 2 ** g
    if k == 1:
        return StepFn(g, (1.0,) * n_cells, p)
    j, t = _haar_level(k)
    if j + 1 > g:
        raise ValueError(f"haar index {k} (level {j}) needs grid_log2 >= {j + 1}")
    amp = 1.0 if math.isinf(p) else 2.0 ** (j / p)
    cells = np.zeros(n_cells)
    half = 2 ** (g - j - 1)
    start = (t - 1) * 2 * half
    cells[start : start + half] = amp
    cells[start + half : start + 2 * half] = -amp
    return StepFn(g, tuple(cells), p)


def haar_matrix(grid_log2: int, p: float = 2.0) -> np.ndarray:
    """All 2**g Haar functions sampled on the grid; row k-1 is h_k."""
    g = grid_log2
    n = 2 ** g
    out = np.zeros((n, n))
    out[0] = 1.0
    for j in range(g):
        amp = 1.0 if math.isinf(p) else 2.0 ** (j / p)
        half = 2 ** (g - j - 1)
        for t in range(1, 2 ** j + 1):
            row = 2 ** j + t - 1
            start = (t - 1) * 2 * half
            out[row, start : start + half] = amp
            out[row, start + half : start + 2 * half] = -amp
    return out


def haar_coefficients(f: StepFn) -> np.ndarray:
    """Expansion coefficients of f over the L^p-normalized Haar basis (p = f.p).

    Computed from the exact L^2 inner products on the grid, rescaled per
    level: c_k = <f, h_k^(2)> * 2**(j/2 - j/p).
    """
    g = f.grid_log2
    h2 = haar_matrix(g, 2.0)
    d = (h2 @ f.as_array()) * 2.0 ** -g
    scale = np.ones(2 ** g)
    inv_p = 0.0 if math.isinf(f.p) else 1.0 / f.p
    for j in range(g):
        block = slice(2 ** j, 2 ** (j + 1))
        scale[block] = 2.0 ** (j * (0.5 - inv_p))
    return d * scale


@dataclass(frozen=True)
class Dictionary:
    """A named enumerated dictionary of unit-norm elements."""

    kind: str
    size: int
    p: float = 2.0
    grid_log2: int = 0

    def __post_init__(self):
        if self.kind not in (ORTHONORMAL_COORD, HAAR_P):
            raise ValueError(f"unknown dictionary kind {self.kind!r}")
        if self.size < 1:
            raise ValueError("dictionary size must be >= 1")
        if self.kind == HAAR_P:
            if self.size > 2 ** self.grid_log2:
                raise ValueError("haar dictionary cannot exceed 2**grid_log2 elements")
            if self.size >= 2:
                j, _ = _haar_level(self.size)
                if j + 1 > self.grid_log2:
                    raise ValueError(
                        f"haar dictionary of size {self.size} needs grid_log2 >= {j + 1}"
                    )

    def element(self, k: int):
        """k-th dictionary element (1-based)."""
        if not 1 <= k <= self.size:
            raise IndexError(f"dictionary index {k} out of range 1..{self.size}")
        if self.kind == ORTHONORMAL_COORD:
            return RealSeq((0.0,) * (k - 1) + (1.0,), L2)
        return haar(k, self.grid_log2, self.p)


@dataclass(frozen=True)
class GreedyResult:
    n: int
    approximant: Union[RealSeq, StepFn]
    residual_norm: float
    permutation_head: Tuple[int, ...]


def sigma_n_orthonormal(x: RealSeq, n: int) -> float:
    """Exact best n-term error for an orthonormal system: the l2 tail of the
    coefficients sorted by decreasing modulus."""
    if x.norm_tag != L2:
        raise ValueError("sigma_n_orthonormal needs an L2-tagged sequence")
    if n < 0:
        raise ValueError("n must be >= 0")
    c = np.sort(np.abs(x.as_array()))[::-1]
    return float(np.sqrt((c[n:] ** 2).sum()))


def _greedy_order(coeffs: np.ndarray) -> list:
    # ties in |c_k| broken by smaller index
    return sorted(range(len(coeffs)), key=lambda i: (-abs(coeffs[i]), i))


def greedy(x, dictionary: Dictionary, n: int) -> GreedyResult:
    """Greedy partial sum of the n largest-modulus coefficients of x."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if dictionary.kind == ORTHONORMAL_COORD:
        if not isinstance(x, RealSeq):
            raise TypeError("coordinate dictionaries expect a RealSeq")
        coeffs = x.as_array()
        order = _greedy_order(coeffs)
        head = order[:n]
        approx = np.zeros_like(coeffs)
        approx[head] = coeffs[head]
        residual = RealSeq(tuple(coeffs - approx), x.norm_tag)
        return GreedyResult(
            n=n,
            approximant=RealSeq(tuple(approx), x.norm_tag),
            residual_norm=norm(residual),
            permutation_head=tuple(i + 1 for i in head),
        )
    if not isinstance(x, StepFn):
        raise TypeError("haar dictionaries expect a StepFn")
    if x.grid_log2 != dictionary.grid_log2:
        raise ValueError("grid mismatch between function and dictionary")
    coeffs = haar_coefficients(x)
    order = _greedy_order(coeffs)
    head = order[:n]
    hp = haar_matrix(x.grid_log2, x.p)
    approx_cells = coeffs[head] @ hp[head] if head else np.zeros(2 ** x.grid_log2)
    approx = x.with_values(approx_cells)
    residual = x.with_values(x.as_array() - approx_cells)
    return GreedyResult(
        n=n,
        approximant=approx,
        residual_norm=lp_norm(residual),
        permutation_head=tuple(i + 1 for i in head),
    )


def _indicator_sum(dictionary: Dictionary, indices: Iterable[int]):
    indices = sorted(indices)
    if dictionary.kind == ORTHONORMAL_COORD:
        vals = np.zeros(max(indices))
        vals[[i - 1 for i in indices]] = 1.0
        return RealSeq(tuple(vals), L2)
    cells = np.zeros(2 ** dictionary.grid_log2)
    for k in indices:
        cells += haar(k, dictionary.grid_log2, dictionary.p).as_array()
    return StepFn(dictionary.grid_log2, tuple(cells), dictionary.p)


def democracy_ratio(dictionary: Dictionary, lam, lam_star) -> float:
    """||sum_{k in lam} phi_k|| / ||sum_{k in lam*} phi_k|| for equal cardinalities."""
    lam, lam_star = sorted(set(lam)), sorted(set(lam_star))
    if not lam or not lam_star:
        raise ValueError("index sets must be non-empty")
    if len(lam) != len(lam_star):
        raise ValueError("index sets must have equal cardinality")
    for k in lam + lam_star:
        if not 1 <= k <= dictionary.size:
            raise IndexError(f"index {k} outside dictionary range")
    num = _indicator_sum(dictionary, lam)
    den = _indicator_sum(dictionary, lam_star)
    if isinstance(num, RealSeq):
        return norm(num) / norm(den)
    return lp_norm(num) / lp_norm(den)


def jump_witness_nterm(dictionary: Dictionary, n: int) -> Tuple[float, float]:
    """Greedy residuals (||x_n - G_n x_n||, ||x_n - G_2n x_n||) for
    x_n = sum of the first 3n dictionary elements."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if dictionary.size < 3 * n:
        raise ValueError(f"dictionary needs at least {3 * n} elements")
    if dictionary.kind == ORTHONORMAL_COORD:
        x = RealSeq((1.0,) * (3 * n), L2)
    else:
        x = _indicator_sum(dictionary, range(1, 3 * n + 1))
    r1 = greedy(x, dictionary, n).residual_norm
    r2 = greedy(x, dictionary, 2 * n).residual_norm
    return r1, r2


def coord_witness(n: int) -> RealSeq:
    """The witness family x_n = e_1 + ... + e_3n for the coordinate scheme."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return RealSeq((1.0,) * (3 * n), L2)


def coord_scheme() -> SchemeDescriptor:
    """n-term approximation over the orthonormal coordinate system; K(n) = 2n."""

    def error_fn(x, n):
        return sigma_n_orthonormal(x, n), Kind.EXACT

    return SchemeDescriptor("nterm-coord", lambda n: 2 * n, error_fn)
