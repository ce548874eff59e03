"""Command-line front end: synthetic generators, factorization, compression,
completion, separation, and metrics over TEN1 files.

Exit codes: 0 success, 1 validation error (bad flags, missing or mismatched
files), 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import compression, decomposition
from .completion import SamplingMask, SolverConfig, complete_tnn, sample_mask, synth_low_tubal_rank
from .errors import NumericalError
from .rpca import complete_matrix_baseline, rpca_matrix_baseline, rpca_tensor, synth_tube_sparse
from .tenfile import read_tensor, write_tensor


class CliError(ValueError):
    """Raised for anything that should exit with status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _parse_dims(text, min_order=3):
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise CliError(f"bad dims {text!r}, expected comma-separated integers")
    if len(dims) < min_order or any(d < 1 for d in dims):
        raise CliError(f"dims must be >= {min_order} positive extents, got {text!r}")
    return dims


def _read_dense(path, what="tensor"):
    value = read_tensor(path)
    if isinstance(value, SamplingMask):
        raise CliError(f"{path} holds a mask, expected a {what}")
    return value


def _read_mask(path):
    value = read_tensor(path)
    if not isinstance(value, SamplingMask):
        raise CliError(f"{path} holds a dense tensor, expected a mask")
    return value


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _solver_config(args):
    try:
        return SolverConfig(penalty=args.rho, tol=args.tol, max_iters=args.max_iters)
    except ValueError as exc:
        raise CliError(str(exc))


def _cmd_synth_lowrank(args):
    dims = _parse_dims(args.dims)
    tensor = synth_low_tubal_rank(dims, args.tubal_rank, args.seed)
    write_tensor(tensor, args.out)


def _cmd_synth_shiftvideo(args):
    tensor = decomposition.shifted_frames(args.n, args.frames, args.seed)
    write_tensor(tensor, args.out)


def _cmd_synth_mask(args):
    dims = _parse_dims(args.dims, min_order=2)
    mask = sample_mask(dims, args.rate, args.seed)
    write_tensor(mask, args.out)


def _cmd_synth_tubenoise(args):
    dims = _parse_dims(args.dims)
    tensor = synth_tube_sparse(dims, args.fraction, args.sigma, args.block_len, args.seed)
    write_tensor(tensor, args.out)


def _cmd_tsvd(args):
    tensor = _read_dense(args.in_)
    factors = decomposition.tsvd(tensor)
    write_tensor(factors.u, f"{args.out_prefix}_U.ten")
    write_tensor(factors.s, f"{args.out_prefix}_S.ten")
    write_tensor(factors.v, f"{args.out_prefix}_V.ten")
    ranks = decomposition.multi_rank(tensor)
    rows = [(j + 1, int(r)) for j, r in enumerate(ranks.p)]
    _write_csv(f"{args.out_prefix}_ranks.csv", ("slice", "rank"), rows)


_METHOD_ALIASES = {"svd": "svd", "tsvd": "tsvd", "tubal": "tsvd_tubal"}


def _cmd_compress(args):
    if args.k is None and not args.sweep:
        raise CliError("one of --k or --sweep is required")
    tensor = _read_dense(args.in_)
    ref = _read_dense(args.ref, "reference tensor") if args.ref else None
    ks = [args.k] if args.k is not None else [int(p) for p in args.sweep.split(",")]
    reports = compression.sweep(tensor, _METHOD_ALIASES[args.method], ks, ref=ref)
    rows = [(r.method, r.k, float(r.ratio), r.rse_db) for r in reports]
    _write_csv(args.report, ("method", "k", "ratio", "rse_db"), rows)


def _cmd_complete(args):
    observed = _read_dense(args.in_)
    mask = _read_mask(args.mask)
    cfg = _solver_config(args)
    if args.method == "tnn":
        result, trace = complete_tnn(observed, mask, cfg)
    else:
        result, trace = complete_matrix_baseline(observed, mask, cfg)
    write_tensor(result, args.out)
    if args.trace:
        rows = [
            (i + 1, trace.residuals[i], trace.objectives[i], trace.seconds[i])
            for i in range(trace.iterations)
        ]
        _write_csv(args.trace, ("iter", "residual", "tnn", "seconds"), rows)


def _cmd_rpca(args):
    tensor = _read_dense(args.in_)
    cfg = _solver_config(args)
    if args.lam == "auto":
        lam = None
    else:
        try:
            lam = float(args.lam)
        except ValueError:
            raise CliError(f"bad --lambda {args.lam!r}, expected 'auto' or a number")
    if args.method == "tensor":
        result = rpca_tensor(tensor, lam, cfg)
    else:
        result = rpca_matrix_baseline(tensor, lam, cfg)
    write_tensor(result.low_rank, args.out_l)
    write_tensor(result.sparse, args.out_s)
    if args.trace:
        trace = result.trace
        rows = [
            (
                i + 1,
                trace.residuals[i],
                trace.objectives[i],
                trace.sparse_norms[i],
                trace.seconds[i],
            )
            for i in range(trace.iterations)
        ]
        _write_csv(
            args.trace, ("iter", "feasibility", "tnn_L", "l112_S", "seconds"), rows
        )


def _cmd_metrics_rse(args):
    rec = _read_dense(args.rec)
    ref = _read_dense(args.ref, "reference tensor")
    print(compression.rse_db(rec, ref))


def _add_solver_flags(parser):
    parser.add_argument("--rho", type=float, default=1.0, help="ADMM penalty")
    parser.add_argument("--tol", type=float, default=1e-6, help="stopping tolerance")
    parser.add_argument("--max-iters", type=int, default=1000)


def build_parser():
    parser = _Parser(prog="tsvdkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="synthetic tensor generators")
    synth_sub = synth.add_subparsers(dest="generator", required=True)

    lowrank = synth_sub.add_parser("lowrank", help="generic low-tubal-rank tensor")
    lowrank.add_argument("--dims", required=True)
    lowrank.add_argument("--tubal-rank", type=int, required=True)
    lowrank.add_argument("--seed", type=int, default=None)
    lowrank.add_argument("--out", required=True)
    lowrank.set_defaults(handler=_cmd_synth_lowrank)

    shift = synth_sub.add_parser("shiftvideo", help="cyclically shifted frames")
    shift.add_argument("--n", type=int, required=True, help="frame side length")
    shift.add_argument("--frames", type=int, required=True)
    shift.add_argument("--seed", type=int, default=None)
    shift.add_argument("--out", required=True)
    shift.set_defaults(handler=_cmd_synth_shiftvideo)

    mask = synth_sub.add_parser("mask", help="independent entry sampling mask")
    mask.add_argument("--dims", required=True)
    mask.add_argument("--rate", type=float, required=True)
    mask.add_argument("--seed", type=int, default=None)
    mask.add_argument("--out", required=True)
    mask.set_defaults(handler=_cmd_synth_mask)

    noise = synth_sub.add_parser("tubenoise", help="blockwise tube-sparse noise")
    noise.add_argument("--dims", required=True)
    noise.add_argument("--fraction", type=float, required=True)
    noise.add_argument("--sigma", type=float, required=True)
    noise.add_argument("--block-len", type=int, required=True)
    noise.add_argument("--seed", type=int, default=None)
    noise.add_argument("--out", required=True)
    noise.set_defaults(handler=_cmd_synth_tubenoise)

    tsvd_cmd = sub.add_parser("tsvd", help="factorize and report spectral ranks")
    tsvd_cmd.add_argument("--in", dest="in_", required=True)
    tsvd_cmd.add_argument("--out-prefix", required=True)
    tsvd_cmd.set_defaults(handler=_cmd_tsvd)

    comp = sub.add_parser("compress", help="truncation compression report")
    comp.add_argument("--method", choices=sorted(_METHOD_ALIASES), required=True)
    comp.add_argument("--k", type=int, default=None)
    comp.add_argument("--sweep", default=None, help="comma-separated k grid")
    comp.add_argument("--in", dest="in_", required=True)
    comp.add_argument("--ref", default=None, help="reference tensor (default: --in)")
    comp.add_argument("--report", required=True, help="output CSV path")
    comp.set_defaults(handler=_cmd_compress)

    complete = sub.add_parser("complete", help="recover missing entries")
    complete.add_argument("--in", dest="in_", required=True)
    complete.add_argument("--mask", required=True)
    complete.add_argument("--method", choices=("tnn", "matrix"), default="tnn")
    _add_solver_flags(complete)
    complete.add_argument("--out", required=True)
    complete.add_argument("--trace", default=None, help="trace CSV path")
    complete.set_defaults(handler=_cmd_complete)

    rpca_cmd = sub.add_parser("rpca", help="low-rank plus sparse separation")
    rpca_cmd.add_argument("--in", dest="in_", required=True)
    rpca_cmd.add_argument("--method", choices=("tensor", "matrix"), default="tensor")
    rpca_cmd.add_argument("--lambda", dest="lam", default="auto")
    _add_solver_flags(rpca_cmd)
    rpca_cmd.add_argument("--out-l", required=True)
    rpca_cmd.add_argument("--out-s", required=True)
    rpca_cmd.add_argument("--trace", default=None, help="trace CSV path")
    rpca_cmd.set_defaults(handler=_cmd_rpca)

    metrics = sub.add_parser("metrics", help="reconstruction metrics")
    metrics_sub = metrics.add_subparsers(dest="metric", required=True)
    rse = metrics_sub.add_parser("rse", help="relative square error in dB")
    rse.add_argument("--rec", required=True)
    rse.add_argument("--ref", required=True)
    rse.set_defaults(handler=_cmd_metrics_rse)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.handler(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
