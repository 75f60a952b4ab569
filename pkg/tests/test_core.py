import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lethargylab.core import (
    ErrorCurve,
    Kind,
    L2,
    RealSeq,
    SUP,
    SchemeDescriptor,
    StepFn,
    error_curve,
    lp_norm,
    norm,
)
from lethargylab import nterm, quantize


def test_norm_sup_examples():
    assert norm(RealSeq((3, -4, 1), SUP)) == 4.0
    assert norm(RealSeq((3, 4), L2)) == 5.0
    assert norm(RealSeq((), SUP)) == 0.0
    assert norm(RealSeq((), L2)) == 0.0


def test_norm_zero_iff_zero():
    assert norm(RealSeq((0.0, 0.0), SUP)) == 0.0
    assert norm(RealSeq((0.0, 1e-300), SUP)) > 0.0


def test_bad_norm_tag_rejected():
    with pytest.raises(ValueError):
        RealSeq((1.0,), "L7")


def test_lp_norm_examples():
    assert lp_norm(StepFn(1, (1, -1), math.inf)) == 1.0
    assert lp_norm(StepFn(1, (1, -1), 2)) == 1.0
    assert lp_norm(StepFn(2, (2, 0, 0, 0), 1)) == 0.5


@pytest.mark.parametrize("g", [0, 1, 3])
@pytest.mark.parametrize("p", [1, 2, 3, math.inf])
@pytest.mark.parametrize("c", [0.5, -2.0, 7.25])
def test_lp_norm_single_cell_closed_form(g, p, c):
    cells = [0.0] * 2 ** g
    cells[0] = c
    f = StepFn(g, tuple(cells), p)
    expected = abs(c) if math.isinf(p) else abs(c) * 2.0 ** (-g / p)
    assert lp_norm(f) == pytest.approx(expected, abs=1e-15)


def test_stepfn_shape_checked():
    with pytest.raises(ValueError):
        StepFn(2, (1, 2, 3), 2)
    with pytest.raises(ValueError):
        StepFn(1, (1, 2), 0.5)


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
seqs = st.lists(finite, min_size=0, max_size=12)


@settings(max_examples=200)
@given(seqs, seqs, st.sampled_from([SUP, L2]))
def test_norm_triangle_inequality(a, b, tag):
    size = max(len(a), len(b))
    a = a + [0.0] * (size - len(a))
    b = b + [0.0] * (size - len(b))
    x, y = RealSeq(tuple(a), tag), RealSeq(tuple(b), tag)
    s = RealSeq(tuple(u + v for u, v in zip(a, b)), tag)
    assert norm(s) <= norm(x) + norm(y) + 1e-12 * (1 + norm(x) + norm(y))


@settings(max_examples=200)
@given(seqs, st.floats(min_value=-100, max_value=100, allow_nan=False), st.sampled_from([SUP, L2]))
def test_norm_homogeneous(a, lam, tag):
    x = RealSeq(tuple(a), tag)
    scaled = RealSeq(tuple(lam * v for v in a), tag)
    assert norm(scaled) == pytest.approx(abs(lam) * norm(x), abs=1e-12, rel=1e-12)


def _sigma_bruteforce(values, n):
    # independent oracle: minimize the l2 residual over all n-element supports
    idx = range(len(values))
    best = math.inf
    for support in itertools.combinations(idx, min(n, len(values))):
        resid = math.sqrt(sum(v * v for i, v in enumerate(values) if i not in support))
        best = min(best, resid)
    return best


def test_error_curve_orthonormal_example():
    x = RealSeq((1.0, 1.0, 1.0), L2)
    curve = error_curve(nterm.coord_scheme(), x, 3)
    expected = [_sigma_bruteforce(x.values, n) for n in range(4)]
    assert expected == pytest.approx([math.sqrt(3), math.sqrt(2), 1.0, 0.0])
    assert list(curve.values()) == pytest.approx(expected)
    assert all(k is Kind.EXACT for k in curve.kinds())


def test_error_curve_zero_element():
    curve = error_curve(nterm.coord_scheme(), RealSeq((), L2), 4)
    assert list(curve.values()) == [0.0] * 5


def test_error_curve_quantize_monotone():
    rng = np.random.default_rng(7)
    x = RealSeq(tuple(rng.uniform(-1, 1, 12)), SUP)
    curve = error_curve(quantize.scheme(), x, 8)
    assert curve.is_monotone_exact(tol=0.0)


def test_error_curve_requires_nmax():
    with pytest.raises(ValueError):
        error_curve(nterm.coord_scheme(), RealSeq((1.0,), L2), 0)


def test_error_curve_propagates_failures_with_offending_n():
    def bad(x, n):
        if n == 2:
            raise ValueError("boom")
        return 1.0, Kind.EXACT

    scheme = SchemeDescriptor("bad", lambda n: n, bad)
    with pytest.raises(RuntimeError, match="n=2"):
        error_curve(scheme, None, 3)


def test_error_curve_rejects_negative_values():
    with pytest.raises(ValueError):
        ErrorCurve(((0, -1.0, Kind.EXACT),))


def test_jump_map_validated():
    scheme = SchemeDescriptor("shrink", lambda n: n - 1, lambda x, n: (0.0, Kind.EXACT))
    with pytest.raises(ValueError):
        scheme.jump(3)


def test_csv_round_trip():
    curve = ErrorCurve(((0, 1.5, Kind.EXACT), (1, 0.125, Kind.UPPER_BOUND), (2, 0.1, Kind.SAMPLED)))
    again = ErrorCurve.from_csv(curve.to_csv())
    assert again == curve


def test_json_round_trip():
    curve = ErrorCurve(((0, math.sqrt(2), Kind.EXACT), (1, 1.0, Kind.EXACT)))
    assert ErrorCurve.from_json(curve.to_json()) == curve


def test_csv_header_checked():
    with pytest.raises(ValueError):
        ErrorCurve.from_csv("a,b\n1,2")
