import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from lethargylab.core import Kind, L2, RealSeq, SUP, SchemeDescriptor
from lethargylab.certify import (
    COLLAPSED,
    INCONCLUSIVE,
    WITNESSED,
    brudnyi_gap_interleaved,
    check_jump,
    collapse_detect,
    dist_to_b,
    dist_to_pi,
    interleaved_scheme,
    interleaved_witness,
)
from lethargylab import nterm, quantize


def dist_to_b_lp(values, m):
    """Independent oracle via linear programming.

    B_m splits into 2(m-1) convex slabs according to which head coordinate
    attains the cap sup and with which sign; on each slab the Chebyshev
    projection is an LP: minimize t subject to |x_k - y_k| <= t (k <= m),
    |x_k| <= t (k > m), and sigma*y_m <= s*y_j/m for both signs sigma."""
    x = np.asarray(values, dtype=float)
    tail = float(np.abs(x[m:]).max()) if len(x) > m else 0.0
    head = x[: min(m, len(x))]
    head = np.concatenate([head, np.zeros(m - len(head))])
    best = math.inf
    for j in range(m - 1):
        for s in (1.0, -1.0):
            # variables: y_1..y_m, t
            c = np.zeros(m + 1)
            c[-1] = 1.0
            a_ub, b_ub = [], []
            for k in range(m):
                row = np.zeros(m + 1)
                row[k], row[-1] = 1.0, -1.0
                a_ub.append(row)
                b_ub.append(head[k])
                row = np.zeros(m + 1)
                row[k], row[-1] = -1.0, -1.0
                a_ub.append(row)
                b_ub.append(-head[k])
            for sigma in (1.0, -1.0):
                row = np.zeros(m + 1)
                row[m - 1] = sigma
                row[j] = -s / m
                a_ub.append(row)
                b_ub.append(0.0)
            res = linprog(c, A_ub=np.asarray(a_ub), b_ub=np.asarray(b_ub),
                          bounds=[(None, None)] * m + [(0, None)], method="highs")
            assert res.success
            best = min(best, res.fun)
    return max(best, tail)


class TestDistances:
    def test_dist_to_pi(self):
        x = RealSeq((5.0, 2.0, 3.0, 1.0), SUP)
        assert dist_to_pi(x, 1) == 3.0
        assert dist_to_pi(x, 3) == 1.0
        assert dist_to_pi(x, 9) == 0.0

    def test_dist_to_b_examples(self):
        # head big enough: cap is slack, only the tail matters
        assert dist_to_b(RealSeq((1.0, 0.25, 0.1), SUP), 2) == 0.1
        # cap binds: x = (0, 1), m = 2 -> (2*1 - 0)/3
        assert dist_to_b(RealSeq((0.0, 1.0), SUP), 2) == pytest.approx(2.0 / 3.0)
        # m = 1 reduces to the tail distance
        assert dist_to_b(RealSeq((7.0, 0.5), SUP), 1) == 0.5

    def test_dist_to_b_unit_vector(self):
        # e_m against B_m: inflating the head costs as much as it buys
        for m in (2, 3, 5):
            e_m = RealSeq((0.0,) * (m - 1) + (1.0,), SUP)
            assert dist_to_b(e_m, m) == pytest.approx(m / (m + 1.0))

    def test_dist_to_b_matches_lp(self):
        rng = np.random.default_rng(12)
        for _ in range(40):
            size = int(rng.integers(1, 6))
            vals = tuple(np.round(rng.uniform(-1, 1, size), 4))
            x = RealSeq(vals, SUP)
            for m in range(2, 5):
                got = dist_to_b(x, m)
                want = dist_to_b_lp(vals, m)
                assert got == pytest.approx(want, abs=1e-6), (vals, m)

    def test_dist_to_b_rejects_bad_m(self):
        with pytest.raises(ValueError):
            dist_to_b(RealSeq((1.0,), SUP), 0)


class TestCheckJump:
    def test_coordinate_scheme_witnessed(self):
        scheme = nterm.coord_scheme()
        cert = check_jump(scheme, [(n, nterm.coord_witness(n)) for n in (1, 2, 4, 8)])
        assert cert.verdict == WITNESSED
        assert cert.c == pytest.approx(math.sqrt(2))
        assert all(r == pytest.approx(math.sqrt(2)) for _, r in cert.ratio_profile)

    def test_cap_exceeded_is_inconclusive(self):
        scheme = nterm.coord_scheme()
        cert = check_jump(scheme, [(2, nterm.coord_witness(2))], c_cap=1.2)
        assert cert.verdict == INCONCLUSIVE
        assert cert.c is None
        assert "exceeds cap" in cert.envelope

    def test_rejects_witness_inside_a_n(self):
        scheme = nterm.coord_scheme()
        x = RealSeq((1.0, 0.0, 0.0), L2)  # one nonzero coordinate: inside A_1
        with pytest.raises(ValueError, match="closure of A_1"):
            check_jump(scheme, [(1, x)])

    def test_rejects_witness_inside_a_k(self):
        scheme = nterm.coord_scheme()
        x = RealSeq((1.0, 1.0, 1.0), L2)  # 3 coordinates: inside A_4 = A_K(2)
        with pytest.raises(ValueError, match="A_K"):
            check_jump(scheme, [(2, x)])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            check_jump(nterm.coord_scheme(), [])

    def test_json_round_trips(self):
        import json

        cert = check_jump(nterm.coord_scheme(), [(2, nterm.coord_witness(2))])
        payload = json.loads(cert.to_json())
        assert payload["verdict"] == WITNESSED
        assert payload["c"] == pytest.approx(math.sqrt(2))


class TestCollapseDetect:
    def test_quantization_collapses(self):
        rng = np.random.default_rng(19)
        samples = [RealSeq(tuple(rng.uniform(-1, 1, 20)), SUP) for _ in range(10)]
        cert = collapse_detect(quantize.scheme(), samples, n_max=10)
        assert cert.verdict == COLLAPSED
        assert "sup_n" in cert.envelope

    def test_coordinate_scheme_does_not_collapse(self):
        # slowly decaying coefficients make n * sigma_n grow past any constant
        x = RealSeq(tuple(1.0 / math.sqrt(k + 1) for k in range(400)), L2)
        cert = collapse_detect(nterm.coord_scheme(), [x], n_max=120)
        assert cert.verdict == INCONCLUSIVE

    def test_zero_samples_inconclusive(self):
        cert = collapse_detect(quantize.scheme(), [RealSeq((0.0, 0.0), SUP)], 3)
        assert cert.verdict == INCONCLUSIVE
        assert cert.envelope == "no nonzero samples"

    def test_requires_exact_oracle(self):
        sampled = SchemeDescriptor(
            "sampled", lambda n: n + 1, lambda x, n: (1.0, Kind.SAMPLED)
        )
        with pytest.raises(ValueError):
            collapse_detect(sampled, [object()], 2)

    def test_ratio_profile_diverges_for_quantization(self):
        rng = np.random.default_rng(31)
        samples = [RealSeq(tuple(rng.uniform(-1, 1, 40)), SUP) for _ in range(5)]
        cert = collapse_detect(quantize.scheme(), samples, n_max=6)
        ratios = dict(cert.ratio_profile)
        # jumping from n to n^2 wipes out most of the error on generic data
        assert ratios[2] > 1.0


class TestInterleaved:
    def test_error_ladder(self):
        x = RealSeq((0.5, 0.4, 0.3), SUP)
        scheme = interleaved_scheme()
        assert scheme.error_fn(x, 0) == (0.5, Kind.EXACT)
        assert scheme.error_fn(x, 1) == (0.4, Kind.EXACT)  # Pi_1
        assert scheme.error_fn(x, 3) == (0.3, Kind.EXACT)  # Pi_2
        e2, _ = scheme.error_fn(x, 2)  # B_2
        assert e2 == pytest.approx(max(0.3, (2 * 0.4 - 0.5) / 3.0))

    def test_nested_errors_nonincreasing(self):
        rng = np.random.default_rng(14)
        scheme = interleaved_scheme()
        for _ in range(25):
            x = RealSeq(tuple(rng.uniform(-1, 1, 12)), SUP)
            errs = [scheme.error_fn(x, n)[0] for n in range(10)]
            assert all(a >= b - 1e-12 for a, b in zip(errs, errs[1:]))

    def test_witness_certifies_c_equal_one(self):
        scheme = interleaved_scheme()
        cert = check_jump(scheme, [(n, interleaved_witness(n)) for n in range(1, 9)])
        assert cert.verdict == WITNESSED
        assert cert.c == pytest.approx(1.0)

    def test_witness_sits_beyond_reach(self):
        scheme = interleaved_scheme()
        for n in range(1, 8):
            x = interleaved_witness(n)
            assert scheme.error_fn(x, n)[0] == 1.0
            assert scheme.error_fn(x, scheme.jump(n))[0] == 1.0


class TestBrudnyiGap:
    def test_closed_form(self):
        gap = brudnyi_gap_interleaved(6)
        assert [(n, v) for n, v, _ in gap.per_n] == [
            (n, pytest.approx(1.0 / (n + 1))) for n in range(1, 7)
        ]
        assert gap.infimum_estimate == pytest.approx(1.0 / 7.0)

    def test_sampled_dominated_and_close(self):
        gap = brudnyi_gap_interleaved(3, samples=10_000, seed=2)
        exact = {n: v for n, v, _ in gap.per_n}
        for n, est in gap.sampled:
            assert est <= exact[n] + 1e-12
            assert est >= 0.95 * exact[n]

    def test_gap_tends_to_zero_while_jump_holds(self):
        gap = brudnyi_gap_interleaved(50)
        vals = [v for _, v, _ in gap.per_n]
        assert vals[-1] < 0.02
        cert = check_jump(
            interleaved_scheme(), [(n, interleaved_witness(n)) for n in (10, 25, 50)]
        )
        assert cert.verdict == WITNESSED and cert.c == pytest.approx(1.0)

    def test_rejects_bad_nmax(self):
        with pytest.raises(ValueError):
            brudnyi_gap_interleaved(0)
