"""Shared value types for the approximation lab.

Sequences live in c0 (sup norm) or little-l2; step functions model L^p(0,1)
on uniform dyadic grids with closed-form norms.  Every experiment ultimately
produces an ErrorCurve, a table n -> E_n whose entries carry their own
provenance (exact value, upper bound, or sampled estimate).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Tuple

import numpy as np

__all__ = [
    "SUP",
    "L2",
    "Kind",
    "RealSeq",
    "StepFn",
    "ErrorCurve",
    "SchemeDescriptor",
    "norm",
    "lp_norm",
    "error_curve",
]

SUP = "SUP"
L2 = "L2"


class Kind(str, Enum):
    """Provenance of an error value."""

    EXACT = "EXACT"
    UPPER_BOUND = "UPPER_BOUND"
    SAMPLED = "SAMPLED"


@dataclass(frozen=True)
class RealSeq:
    """Finitely supported real sequence x_1..x_N with an implicit zero tail."""

    values: Tuple[float, ...]
    norm_tag: str = SUP

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.norm_tag not in (SUP, L2):
            raise ValueError(f"unknown norm tag {self.norm_tag!r}")

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def norm(x: RealSeq) -> float:
    """Ambient norm of a sequence: sup |x_k| for c0, Euclidean length for l2."""
    if not x.values:
        return 0.0
    if x.norm_tag == SUP:
        return max(abs(v) for v in x.values)
    return float(np.linalg.norm(x.values))


@dataclass(frozen=True)
class StepFn:
    """Piecewise-constant function on the grid of 2**grid_log2 equal cells of [0,1].

    p is the ambient norm exponent; use math.inf for the sup norm.
    """

    grid_log2: int
    cell_values: Tuple[float, ...]
    p: float = math.inf

    def __post_init__(self):
        if self.grid_log2 < 0:
            raise ValueError("grid_log2 must be >= 0")
        vals = tuple(float(v) for v in self.cell_values)
        if len(vals) != 2 ** self.grid_log2:
            raise ValueError(
                f"need {2 ** self.grid_log2} cell values for grid_log2={self.grid_log2}, "
                f"got {len(vals)}"
            )
        object.__setattr__(self, "cell_values", vals)
        p = float(self.p)
        if not p >= 1:
            raise ValueError("p must be >= 1 (math.inf for the sup norm)")
        object.__setattr__(self, "p", p)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.cell_values, dtype=float)

    def with_values(self, values) -> "StepFn":
        return StepFn(self.grid_log2, tuple(values), self.p)


def lp_norm(f: StepFn) -> float:
    """Exact L^p(0,1) norm of a step function: closed-form cell sums, no quadrature."""
    v = np.abs(f.as_array())
    if math.isinf(f.p):
        return float(v.max())
    cell = 2.0 ** -f.grid_log2
    return float((v ** f.p).sum() * cell) ** (1.0 / f.p)


@dataclass(frozen=True)
class ErrorCurve:
    """Finite table n -> E_n of best-approximation errors with per-entry kinds."""

    entries: Tuple[Tuple[int, float, Kind], ...]

    def __post_init__(self):
        cleaned = []
        for n, value, kind in self.entries:
            value = float(value)
            if value < 0.0:
                raise ValueError(f"negative error {value} at n={n}")
            cleaned.append((int(n), value, Kind(kind)))
        object.__setattr__(self, "entries", tuple(cleaned))

    def ns(self) -> np.ndarray:
        return np.array([n for n, _, _ in self.entries], dtype=int)

    def values(self) -> np.ndarray:
        return np.array([v for _, v, _ in self.entries], dtype=float)

    def kinds(self) -> Tuple[Kind, ...]:
        return tuple(k for _, _, k in self.entries)

    def value(self, n: int) -> float:
        for m, v, _ in self.entries:
            if m == n:
                return v
        raise KeyError(n)

    def is_monotone_exact(self, tol: float = 0.0) -> bool:
        """True if the EXACT entries are non-increasing in n (A_n are nested)."""
        exact = [(n, v) for n, v, k in self.entries if k is Kind.EXACT]
        exact.sort()
        return all(b[1] <= a[1] + tol for a, b in zip(exact, exact[1:]))

    def to_csv(self) -> str:
        lines = ["n,value,kind"]
        for n, v, k in self.entries:
            lines.append(f"{n},{v!r},{k.value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "ErrorCurve":
        rows = [ln for ln in text.strip().splitlines() if ln]
        if not rows or rows[0] != "n,value,kind":
            raise ValueError("expected header 'n,value,kind'")
        entries = []
        for row in rows[1:]:
            n, v, k = row.split(",")
            entries.append((int(n), float(v), Kind(k)))
        return cls(tuple(entries))

    def to_json(self) -> str:
        payload = [{"n": n, "value": v, "kind": k.value} for n, v, k in self.entries]
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "ErrorCurve":
        payload = json.loads(text)
        return cls(tuple((e["n"], e["value"], Kind(e["kind"])) for e in payload))


@dataclass(frozen=True)
class SchemeDescriptor:
    """A named approximation scheme: jump map K and an error functional.

    error_fn(x, n) returns (E(x, A_n), kind).  By convention n = 0 means
    A_0 = {0}, so error_fn(x, 0) is the ambient norm of x.
    """

    name: str
    jump_map: Callable[[int], int]
    error_fn: Callable[[object, int], Tuple[float, Kind]]

    def jump(self, n: int) -> int:
        k = int(self.jump_map(n))
        if k < n:
            raise ValueError(f"jump map of {self.name} gave K({n}) = {k} < {n}")
        return k


def error_curve(scheme: SchemeDescriptor, x, n_max: int) -> ErrorCurve:
    """Tabulate scheme.error_fn(x, n) for n = 0..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    entries = []
    for n in range(n_max + 1):
        try:
            value, kind = scheme.error_fn(x, n)
        except Exception as exc:
            raise RuntimeError(
                f"error_fn of scheme {scheme.name!r} failed at n={n}: {exc}"
            ) from exc
        entries.append((n, value, kind))
    return ErrorCurve(tuple(entries))
