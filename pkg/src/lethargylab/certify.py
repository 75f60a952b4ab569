"""Jump-condition certification and collapse detection.

A scheme satisfies the prescribed-rate property exactly when some constant
c and infinitely many indices n admit witnesses x_n outside the closure of
A_n with E(x_n, A_n) <= c E(x_n, A_K(n)).  At desk scale we certify the
witness side (WITNESSED, with every ratio recomputed from the scheme's own
error functional) or report an empirical collapse envelope (COLLAPSED);
finitely many failures prove nothing, so everything else is INCONCLUSIVE.

This module also hosts the interleaved c0 scheme that alternates the
constrained cones B_m with the coordinate subspaces Pi_m: it is certified
with c = 1 while its unit-sphere gap dist(B_{n+1} n S, Pi_n) = 1/(n+1)
tends to 0, separating the jump condition from the positive-gap condition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import Kind, RealSeq, SUP, SchemeDescriptor, norm

__all__ = [
    "WITNESSED",
    "COLLAPSED",
    "INCONCLUSIVE",
    "JumpCertificate",
    "BrudnyiGap",
    "check_jump",
    "collapse_detect",
    "brudnyi_gap_interleaved",
    "interleaved_scheme",
    "interleaved_witness",
    "dist_to_pi",
    "dist_to_b",
]

WITNESSED = "WITNESSED"
COLLAPSED = "COLLAPSED"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class JumpCertificate:
    scheme: str
    verdict: str
    c: Optional[float]
    witness_ns: Tuple[int, ...]
    witness_elements: Tuple[str, ...]
    envelope: Optional[str] = None
    ratio_profile: Tuple[Tuple[int, float], ...] = ()

    def to_json(self) -> str:
        payload = {
            "scheme": self.scheme,
            "verdict": self.verdict,
            "c": self.c,
            "witness_ns": list(self.witness_ns),
            "witness_elements": list(self.witness_elements),
            "envelope": self.envelope,
            "ratio_profile": [[n, r] for n, r in self.ratio_profile],
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _describe(x) -> str:
    cls = type(x).__name__
    try:
        size = len(x)
    except TypeError:
        size = getattr(x, "grid_log2", None)
        return f"{cls}(grid_log2={size})" if size is not None else cls
    return f"{cls}(len={size})"


def check_jump(
    scheme: SchemeDescriptor,
    witnesses: Sequence[Tuple[int, object]],
    c_cap: float = float("inf"),
) -> JumpCertificate:
    """Certify the jump condition from a witness family.

    Every ratio E(x_n, A_n) / E(x_n, A_K(n)) is recomputed from the
    scheme's error functional; the certificate c is the largest ratio, i.e.
    the smallest constant valid for all supplied witnesses.  A witness
    inside the closure of A_n or of A_K(n) is rejected outright.
    """
    if not witnesses:
        raise ValueError("need at least one witness")
    ns: List[int] = []
    elements: List[str] = []
    profile: List[Tuple[int, float]] = []
    for n, x in witnesses:
        e_n, _ = scheme.error_fn(x, n)
        k = scheme.jump(n)
        e_k, _ = scheme.error_fn(x, k)
        if e_n <= 0.0:
            raise ValueError(f"witness at n={n} lies in the closure of A_{n}")
        if e_k <= 0.0:
            raise ValueError(
                f"witness at n={n} lies in the closure of A_K(n) (K({n})={k}); ratio undefined"
            )
        ns.append(int(n))
        elements.append(_describe(x))
        profile.append((int(n), e_n / e_k))
    c = max(r for _, r in profile)
    if c <= c_cap:
        return JumpCertificate(
            scheme=scheme.name,
            verdict=WITNESSED,
            c=c,
            witness_ns=tuple(ns),
            witness_elements=tuple(elements),
            ratio_profile=tuple(profile),
        )
    return JumpCertificate(
        scheme=scheme.name,
        verdict=INCONCLUSIVE,
        c=None,
        witness_ns=tuple(ns),
        witness_elements=tuple(elements),
        envelope=f"smallest constant over witnesses {c:.6g} exceeds cap {c_cap:.6g}",
        ratio_profile=tuple(profile),
    )


def collapse_detect(
    scheme: SchemeDescriptor,
    samples: Sequence[object],
    n_max: int,
    envelope_cap: float = 2.0,
) -> JumpCertificate:
    """Fit the envelope sup_n n * E(x, A_n) / ||x|| over a sample family.

    Requires an exact error oracle.  COLLAPSED is a statement about the
    samples only: every tested element decays at least like 1/n.  The
    ratio profile records the per-n empirical minimum of
    E(x, A_n) / E(x, A_K(n)), a lower-bound witness that the scheme
    constants diverge.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    live = []
    for x in samples:
        size, kind = scheme.error_fn(x, 0)
        if kind is not Kind.EXACT:
            raise ValueError("collapse detection needs an exact error oracle")
        if size > 0.0:
            live.append((x, size))
    if not live:
        return JumpCertificate(
            scheme=scheme.name,
            verdict=INCONCLUSIVE,
            c=None,
            witness_ns=(),
            witness_elements=(),
            envelope="no nonzero samples",
        )
    envelope = 0.0
    profile: List[Tuple[int, float]] = []
    for n in range(1, n_max + 1):
        k = scheme.jump(n)
        ratio_min = None
        for x, size in live:
            e_n, kind_n = scheme.error_fn(x, n)
            if kind_n is not Kind.EXACT:
                raise ValueError("collapse detection needs an exact error oracle")
            envelope = max(envelope, n * e_n / size)
            e_k, _ = scheme.error_fn(x, k)
            if e_k > 0.0:
                ratio = e_n / e_k
                ratio_min = ratio if ratio_min is None else min(ratio_min, ratio)
        if ratio_min is not None:
            profile.append((n, ratio_min))
    verdict = COLLAPSED if envelope <= envelope_cap else INCONCLUSIVE
    return JumpCertificate(
        scheme=scheme.name,
        verdict=verdict,
        c=None,
        witness_ns=tuple(range(1, n_max + 1)),
        witness_elements=tuple(_describe(x) for x, _ in live),
        envelope=(
            f"sup_n n*E(x,A_n) <= {envelope:.6g}*||x|| over {len(live)} samples"
            f" (cap {envelope_cap:g})"
        ),
        ratio_profile=tuple(profile),
    )


# --- the interleaved B/Pi scheme on c0 ---------------------------------------


def dist_to_pi(x: RealSeq, m: int) -> float:
    """Sup-norm distance to the coordinate subspace Pi_m: the tail sup past m."""
    v = np.abs(x.as_array())
    return float(v[m:].max()) if len(v) > m else 0.0


def dist_to_b(x: RealSeq, m: int) -> float:
    """Sup-norm distance to the cone B_m = {supp <= m, |y_m| <= max_{k<m}|y_k|/m}.

    Coordinates below m are free but may be inflated to enlarge the cap on
    the last one; balancing the inflation cost against the residual at
    coordinate m gives the factor m/(m+1):
    d = max(tail sup, max(0, m|x_m| - S) / (m+1)) with S = max_{k<m}|x_k|.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return dist_to_pi(x, 1)
    v = np.abs(x.as_array())
    tail = float(v[m:].max()) if len(v) > m else 0.0
    x_m = float(v[m - 1]) if len(v) >= m else 0.0
    cap_base = float(v[: m - 1].max()) if len(v) >= 1 and m >= 2 and len(v[: m - 1]) else 0.0
    slack = (m * x_m - cap_base) / (m + 1.0)
    return max(tail, slack, 0.0)


def _interleaved_error(x: RealSeq, n: int) -> Tuple[float, Kind]:
    if x.norm_tag != SUP:
        raise ValueError("the interleaved scheme lives in c0")
    if n == 0:
        return norm(x), Kind.EXACT
    if n == 1:
        return dist_to_pi(x, 1), Kind.EXACT
    if n % 2 == 0:
        return dist_to_b(x, n // 2 + 1), Kind.EXACT
    return dist_to_pi(x, (n + 1) // 2), Kind.EXACT


def _reach(n: int) -> int:
    # last coordinate an element of A_n may occupy
    if n <= 1:
        return n
    return n // 2 + 1 if n % 2 == 0 else (n + 1) // 2


def interleaved_scheme() -> SchemeDescriptor:
    """A_0 = {0}, A_1 = Pi_1, A_2 = B_2, A_3 = Pi_2, A_4 = B_3, ...; K(n) = n+1."""
    return SchemeDescriptor("interleaved-b-pi", lambda n: n + 1, _interleaved_error)


def interleaved_witness(n: int) -> RealSeq:
    """Unit coordinate vector beyond the reach of A_{K(n)}: both errors are 1."""
    m = _reach(n + 1) + 1
    return RealSeq((0.0,) * (m - 1) + (1.0,), SUP)


@dataclass(frozen=True)
class BrudnyiGap:
    """The unit-sphere gaps dist(B_{n+1} n S(c0), Pi_n) = 1/(n+1)."""

    per_n: Tuple[Tuple[int, float, Kind], ...]
    infimum_estimate: float
    sampled: Tuple[Tuple[int, float], ...] = ()


def brudnyi_gap_interleaved(
    n_max: int,
    samples: int = 0,
    seed: int = 0,
    sample_ns: Optional[Iterable[int]] = None,
) -> BrudnyiGap:
    """Closed-form gap profile, optionally cross-validated by random search.

    An element of B_{n+1} on the unit sphere has d(x, Pi_n) = |x_{n+1}|,
    capped by sup_{k<=n}|x_k| / (n+1) <= 1/(n+1), with equality attainable;
    hence the gap is exactly 1/(n+1) and the infimum vanishes.  The sampled
    estimator draws sphere elements of the cone and maximizes the distance.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    per_n = tuple((n, 1.0 / (n + 1), Kind.EXACT) for n in range(1, n_max + 1))
    sampled: List[Tuple[int, float]] = []
    if samples > 0:
        rng = np.random.default_rng(seed)
        ns = list(sample_ns) if sample_ns is not None else [n for n, _, _ in per_n]
        for n in ns:
            best = 0.0
            head = rng.uniform(-1.0, 1.0, size=(samples, n))
            # put each draw on the unit sphere of the cone: force one head
            # coordinate to modulus 1, then draw the constrained coordinate
            force = rng.integers(0, n, size=samples)
            head[np.arange(samples), force] = np.sign(
                head[np.arange(samples), force] + 0.5
            )
            last = rng.uniform(-1.0, 1.0, size=samples) / (n + 1)
            for i in range(samples):
                x = RealSeq(tuple(head[i]) + (last[i],), SUP)
                best = max(best, dist_to_pi(x, n))
            sampled.append((n, best))
    return BrudnyiGap(
        per_n=per_n,
        infimum_estimate=1.0 / (n_max + 1),
        sampled=tuple(sampled),
    )
