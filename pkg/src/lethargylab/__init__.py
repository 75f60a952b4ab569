"""lethargylab: empirical certification of approximation schemes.

The library computes exact best-approximation errors for a zoo of concrete
schemes (orthonormal n-term, Haar, free-knot piecewise constants, finite
rank operators, quantization cones, the interleaved B/Pi cones in c0) and
certifies which of them admit jump witnesses and which collapse.
"""

from .core import (
    ErrorCurve,
    Kind,
    L2,
    RealSeq,
    SchemeDescriptor,
    StepFn,
    SUP,
    error_curve,
    lp_norm,
    norm,
)

__all__ = [
    "ErrorCurve",
    "Kind",
    "L2",
    "RealSeq",
    "SchemeDescriptor",
    "StepFn",
    "SUP",
    "error_curve",
    "lp_norm",
    "norm",
]

__version__ = "0.1.0"
