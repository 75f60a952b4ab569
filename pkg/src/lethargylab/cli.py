"""Command-line entry point.

Subcommands map one-to-one onto the library modules; sequence and function
inputs are accepted as files, inline comma lists, or named generators so
the standard experiments are one-liners:

    lethargylab lethargy xi --eps geometric:0.5 --h double --n 1000
    lethargylab nterm witness --dict coord --n 8
    lethargylab quantize --x 1,-1,0.5 --n 2 --exact
    lethargylab freeknot witness --n 1 --grid 14
    lethargylab certify --scheme quantize --nmax 16 --seed 7

All sampled quantities are driven by --seed (default: env LETHARGY_LAB_SEED
or 0), so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import List, Optional

import numpy as np

from . import certify, freeknot, lethargy, nterm, opnum, quantize
from .core import L2, RealSeq, SUP, error_curve


def _default_seed() -> int:
    return int(os.environ.get("LETHARGY_LAB_SEED", "0"))


def _parse_floats(spec: str, n: Optional[int] = None) -> List[float]:
    """Comma list, file path, or generator (geometric:r, inverse-square, ones)."""
    if spec.startswith("geometric:"):
        if n is None:
            raise ValueError("generator input needs --n")
        ratio = float(spec.split(":", 1)[1])
        return [ratio ** k for k in range(n + 1)]
    if spec == "inverse-square":
        if n is None:
            raise ValueError("generator input needs --n")
        return [1.0 / (k + 1) ** 2 for k in range(n + 1)]
    if spec == "ones":
        if n is None:
            raise ValueError("generator input needs --n")
        return [1.0] * (n + 1)
    if os.path.exists(spec):
        with open(spec) as fh:
            return [float(tok) for tok in fh.read().replace(",", "\n").split()]
    return [float(tok) for tok in spec.split(",")]


def _parse_jump(spec: str) -> lethargy.JumpFn:
    """Named jump maps or an explicit table."""
    named = {
        "identity": lambda n: n,
        "succ": lambda n: n + 1,
        "double": lambda n: 2 * n,
        "square": lambda n: max(n * n, n),
    }
    if spec in named:
        return lethargy.JumpFn(named[spec])
    if spec.startswith("plus:"):
        k = int(spec.split(":", 1)[1])
        return lethargy.JumpFn(lambda n: n + k)
    return lethargy.JumpFn([int(round(v)) for v in _parse_floats(spec)])


def _parse_fn(spec: str, grid_log2: int):
    if spec == "identity":
        return freeknot.sample_fn(lambda t: t, grid_log2)
    if spec.startswith("sin:"):
        return freeknot.sample_sin(int(spec.split(":", 1)[1]), grid_log2)
    raise ValueError(f"unknown function spec {spec!r} (use identity or sin:M)")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _cmd_lethargy_xi(args) -> str:
    eps = _parse_floats(args.eps, args.n)
    ds = lethargy.build_xi(eps, _parse_jump(args.h))
    report = ds.check()
    lines = ["n,xi,eps"]
    for n, (xi, e) in enumerate(zip(ds.xi, ds.source_eps)):
        lines.append(f"{n},{float(xi)!r},{float(e)!r}")
    status = "PASS" if report["all_ok"] else "FAIL"
    detail = " ".join(f"{k}={v}" for k, v in report.items() if k != "all_ok")
    lines.append(f"# invariants: {status} ({detail})")
    return "\n".join(lines) + "\n"


def _make_dictionary(args) -> nterm.Dictionary:
    if args.dict == "coord":
        return nterm.Dictionary(nterm.ORTHONORMAL_COORD, size=args.size)
    p = math.inf if args.p in ("inf", "oo") else float(args.p)
    return nterm.Dictionary(
        nterm.HAAR_P, size=args.size, p=p, grid_log2=args.grid
    )


def _cmd_nterm(args) -> str:
    if args.action == "sigma":
        x = RealSeq(tuple(_parse_floats(args.x)), L2)
        return _json({"n": args.n, "sigma": nterm.sigma_n_orthonormal(x, args.n)})
    if args.action == "greedy":
        d = _make_dictionary(args)
        if d.kind == nterm.ORTHONORMAL_COORD:
            x = RealSeq(tuple(_parse_floats(args.x)), L2)
        else:
            x = _parse_fn(args.x, args.grid)
        res = nterm.greedy(x, d, args.n)
        return _json(
            {
                "n": res.n,
                "residual_norm": res.residual_norm,
                "permutation_head": list(res.permutation_head),
            }
        )
    if args.action == "democracy":
        d = _make_dictionary(args)
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        for _ in range(args.trials):
            m = int(rng.integers(1, args.n + 1))
            lam = rng.choice(d.size, size=m, replace=False) + 1
            lam_star = rng.choice(d.size, size=m, replace=False) + 1
            ratio = nterm.democracy_ratio(d, lam.tolist(), lam_star.tolist())
            worst = max(worst, ratio, 1.0 / ratio)
        return _json(
            {"dict": args.dict, "trials": args.trials, "max_ratio": worst, "seed": args.seed}
        )
    # witness
    d = _make_dictionary(args)
    r1, r2 = nterm.jump_witness_nterm(d, args.n)
    return _json({"n": args.n, "residual_n": r1, "residual_2n": r2, "ratio": r1 / r2})


def _cmd_quantize(args) -> str:
    x = RealSeq(tuple(_parse_floats(args.x)), SUP)
    res = quantize.quantize_exact(x, args.n) if args.exact else quantize.quantize_ladder(x, args.n)
    return _json(
        {
            "n": args.n,
            "mode": "exact" if args.exact else "ladder",
            "error": res.error,
            "kind": res.kind.value,
            "levels": list(res.levels.levels),
            "approximant": list(res.approximant.values),
        }
    )


def _cmd_freeknot(args) -> str:
    if args.action == "fit":
        f = _parse_fn(args.fn, args.grid)
        pc, err = freeknot.best_pc_sup(f, args.pieces)
        return _json(
            {
                "pieces": args.pieces,
                "error": err,
                "breakpoints": list(pc.breakpoints),
                "values": list(pc.values),
            }
        )
    e1, e2 = freeknot.equioscillation_witness(args.n, args.grid)
    return _json({"n": args.n, "error_4n3": e1, "error_8n5": e2, "ratio": e1 / e2})


def _cmd_opnum(args) -> str:
    rows = []
    with open(args.matrix) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.replace(",", " ").split()])
    curve = opnum.approx_numbers(opnum.MatrixOp.from_array(rows), args.n)
    return curve.to_csv()


def _certify_nterm(args):
    scheme = nterm.coord_scheme()
    witnesses = [(n, nterm.coord_witness(n)) for n in range(1, args.nmax + 1)]
    return certify.check_jump(scheme, witnesses)


def _certify_freeknot(args):
    scheme = freeknot.scheme()
    grid = args.grid
    ns = [n for n in (1, 2, 4) if n <= args.nmax]
    witnesses = [(n, freeknot.witness_fn(n, grid)) for n in ns]
    return certify.check_jump(scheme, witnesses)


def _certify_quantize(args):
    rng = np.random.default_rng(args.seed)
    samples = [
        RealSeq(tuple(rng.uniform(-1.0, 1.0, size=rng.integers(1, 33))), SUP)
        for _ in range(50)
    ]
    return certify.collapse_detect(quantize.scheme(), samples, args.nmax)


def _certify_interleaved(args):
    scheme = certify.interleaved_scheme()
    witnesses = [(n, certify.interleaved_witness(n)) for n in range(1, args.nmax + 1)]
    return certify.check_jump(scheme, witnesses)


def _certify_opnum(args):
    scheme = opnum.scheme()
    witnesses = []
    for n in range(1, args.nmax + 1):
        dim = 4 * n
        proj = np.zeros((dim, dim))
        proj[np.arange(2 * n), np.arange(2 * n)] = 1.0
        witnesses.append((n, opnum.MatrixOp.from_array(proj)))
    return certify.check_jump(scheme, witnesses)


def _cmd_certify(args) -> str:
    handlers = {
        "nterm": _certify_nterm,
        "freeknot": _certify_freeknot,
        "quantize": _certify_quantize,
        "interleaved": _certify_interleaved,
        "opnum": _certify_opnum,
    }
    cert = handlers[args.scheme](args)
    text = cert.to_json() + "\n"
    if args.scheme == "interleaved":
        gap = certify.brudnyi_gap_interleaved(args.nmax)
        rows = "\n".join(f"#   n={n} gap={g!r}" for n, g, _ in gap.per_n[:8])
        text += (
            f"# unit-sphere gap profile (closed form, first entries):\n{rows}\n"
            f"# infimum estimate: {gap.infimum_estimate!r}\n"
        )
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lethargylab",
        description="Empirical certification lab for approximation schemes.",
    )
    parser.add_argument("-o", "--out", help="write output to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p_leth = sub.add_parser("lethargy", help="dominating-sequence machinery")
    leth_sub = p_leth.add_subparsers(dest="action", required=True)
    p_xi = leth_sub.add_parser("xi", help="build the dominated sequence")
    p_xi.add_argument("--eps", required=True, help="list, file, or generator (geometric:r)")
    p_xi.add_argument("--h", required=True, help="jump map: identity|succ|double|square|plus:k|table")
    p_xi.add_argument("--n", type=int, required=True, help="prefix length - 1")
    p_xi.set_defaults(handler=_cmd_lethargy_xi)

    p_nterm = sub.add_parser("nterm", help="n-term approximation")
    p_nterm.add_argument("action", choices=["sigma", "greedy", "democracy", "witness"])
    p_nterm.add_argument("--dict", choices=["coord", "haar"], default="coord")
    p_nterm.add_argument("--x", help="element: list/file (coord) or identity|sin:M (haar)")
    p_nterm.add_argument("--n", type=int, required=True)
    p_nterm.add_argument("--p", default="2", help="haar norm exponent, or inf")
    p_nterm.add_argument("--grid", type=int, default=10, help="haar grid_log2")
    p_nterm.add_argument("--size", type=int, default=0, help="dictionary size (default 3n)")
    p_nterm.add_argument("--trials", type=int, default=100, help="democracy sample pairs")
    p_nterm.add_argument("--seed", type=int, default=_default_seed())
    p_nterm.set_defaults(handler=_cmd_nterm)

    p_quant = sub.add_parser("quantize", help="quantization cones in c0")
    p_quant.add_argument("--x", required=True, help="sequence: list or file")
    p_quant.add_argument("--n", type=int, required=True, help="distinct-value budget")
    mode = p_quant.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact best error (default)")
    mode.add_argument("--ladder", dest="exact", action="store_false", help="ladder upper bound")
    p_quant.set_defaults(exact=True, handler=_cmd_quantize)

    p_free = sub.add_parser("freeknot", help="free-knot piecewise-constant fits")
    p_free.add_argument("action", choices=["fit", "witness"])
    p_free.add_argument("--pieces", type=int, default=1)
    p_free.add_argument("--fn", default="identity", help="identity or sin:M")
    p_free.add_argument("--grid", type=int, default=12, help="grid_log2")
    p_free.add_argument("--n", type=int, default=1, help="witness index")
    p_free.set_defaults(handler=_cmd_freeknot)

    p_op = sub.add_parser("opnum", help="approximation numbers of a matrix")
    p_op.add_argument("--matrix", required=True, help="CSV/whitespace matrix file")
    p_op.add_argument("--n", type=int, required=True, help="n_max")
    p_op.set_defaults(handler=_cmd_opnum)

    p_cert = sub.add_parser("certify", help="jump-condition certificates")
    p_cert.add_argument(
        "--scheme",
        required=True,
        choices=["nterm", "freeknot", "quantize", "interleaved", "opnum"],
    )
    p_cert.add_argument("--nmax", type=int, required=True)
    p_cert.add_argument("--seed", type=int, default=_default_seed())
    p_cert.add_argument("--grid", type=int, default=14, help="freeknot grid_log2")
    p_cert.set_defaults(handler=_cmd_certify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "nterm":
        if args.size <= 0:
            args.size = max(3 * args.n, 1)
    try:
        text = args.handler(args)
    except (ValueError, IndexError, OSError, RuntimeError) as exc:
        sys.stderr.write(_json({"error": str(exc), "command": args.command}))
        return 1
    _emit(text, args.out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
