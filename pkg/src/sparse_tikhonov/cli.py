"""Command-line benchmark driver.

Examples
--------
Single elastic-net solve on a LIBSVM file::

    sparse-tikhonov --data leu.libsvm --lambda 0.1 --mu-c 1e-3

Warm-started mu path on a synthetic 40x200 instance::

    sparse-tikhonov --synthetic 40 200 --path mu --out runs.csv --trace-out gaps.csv
"""

import argparse
import logging
import sys

import numpy as np

from .bench import (DEFAULT_LAMBDA_PATH, DEFAULT_MU_LAMBDAS, SOLVERS, PathProtocol,
                    emit_csv, emit_gap_trace, run_path, write_csv)
from .datasets import Dataset, load_dataset
from .exceptions import ConfigurationError, InvalidInputError, LibsvmParseError
from .problem import SolverOptions
from .regularizers import KINDS

log = logging.getLogger("sparse_tikhonov")

_LINSYS = {"auto": "auto", "chol": "chol", "smw": "smw", "cg": "cg"}


def synthetic_dataset(m, n, seed=0, k=None, noise=0.01):
    """Gaussian design with a ``k``-sparse ground truth and additive noise."""
    rng = np.random.default_rng(seed)
    k = min(n, 20) if k is None else k
    A = rng.standard_normal((m, n))
    x0 = np.zeros(n)
    x0[rng.choice(n, size=k, replace=False)] = rng.standard_normal(k)
    b = A @ x0 + noise * rng.standard_normal(m)
    return Dataset(A, b, f"synthetic{m}x{n}s{seed}", "synthetic")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="sparse-tikhonov",
        description="Benchmark semismooth Newton solvers for sparse Tikhonov regression.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="path to a LIBSVM or CSV dataset")
    src.add_argument("--synthetic", nargs=2, type=int, metavar=("M", "N"),
                     help="generate a random M x N instance (see --seed)")
    ap.add_argument("--format", choices=("libsvm", "csv"), default="libsvm")
    ap.add_argument("--reg", choices=KINDS, default="l1")
    ap.add_argument("--solver", choices=SOLVERS, default="dssn")
    ap.add_argument("--lambda", dest="lambdas", type=float, nargs="+",
                    help="lambda value(s); defaults depend on --path")
    ap.add_argument("--mu-c", type=float, default=1e-3,
                    help="mu = mu_c * ||A^T b||_inf (base value for --path mu)")
    ap.add_argument("--path", choices=("single", "lambda", "mu"), default="single")
    warm = ap.add_mutually_exclusive_group()
    warm.add_argument("--warm", dest="warm", action="store_true", default=True)
    warm.add_argument("--cold", dest="warm", action="store_false")
    ap.add_argument("--eps", type=float, default=1e-6)
    ap.add_argument("--max-iter", type=int, default=200)
    ap.add_argument("--max-backtracks", type=int, default=50)
    ap.add_argument("--linsys", choices=tuple(_LINSYS), default="auto")
    ap.add_argument("--out", help="CSV report path (stdout if omitted)")
    ap.add_argument("--trace-out", help="gap-trace CSV path")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _protocol(args):
    if args.path == "single":
        lam = args.lambdas[0] if args.lambdas else 1.0
        return PathProtocol.single(lam, args.mu_c)
    if args.path == "lambda":
        return PathProtocol.lambda_path(args.mu_c, args.lambdas or DEFAULT_LAMBDA_PATH,
                                        warm_start=args.warm)
    return PathProtocol.mu_path(args.mu_c, args.lambdas or DEFAULT_MU_LAMBDAS,
                                warm_start=args.warm)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.data:
            dataset = load_dataset(args.data, args.format)
        else:
            dataset = synthetic_dataset(*args.synthetic, seed=args.seed)
        opts = SolverOptions(eps=args.eps, max_iter=args.max_iter,
                             max_backtracks=args.max_backtracks,
                             strategy=_LINSYS[args.linsys])
        protocol = _protocol(args)
        records = run_path(dataset, protocol, args.solver, args.reg, opts)
    except (OSError, ConfigurationError, InvalidInputError, LibsvmParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.out:
        emit_csv(records, args.out)
    else:
        write_csv(records, sys.stdout)
    if args.trace_out:
        emit_gap_trace(records, args.trace_out)

    failed = [r for r in records if not r.converged]
    for r in failed:
        log.warning("%s lambda=%g mu_c=%g did not converge: %s",
                    r.solver, r.lam, r.mu_c, r.message)
    log.info("%d solves, %d failed", len(records), len(failed))
    return 0 if not failed else 1


if __name__ == "__main__":
    sys.exit(main())
