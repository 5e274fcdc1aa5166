"""Regularization-path benchmarks: warm-started lambda and mu sweeps."""

import csv
from dataclasses import dataclass, field

import numpy as np

from . import apg, dssn, pssn
from .datasets import compute_mu
from .exceptions import ConfigurationError, LineSearchError, NumericalError
from .problem import ProblemData, SolverOptions, kkt_residual
from .regularizers import NONNEG, Regularizer

NNZ_THRESHOLD = 1e-10
SOLVERS = ("dssn", "pssn", "apg")
DEFAULT_LAMBDA_PATH = tuple(k / 10 for k in range(10, 0, -1))
DEFAULT_MU_LAMBDAS = (100.0, 10.0, 1.0, 0.1, 0.01)

CSV_FIELDS = ("problem", "m", "n", "lambda", "mu_c", "mu", "solver", "nnz",
              "iterations", "time", "eta", "converged", "gap_to_previous",
              "initial_eta", "warm_started")


@dataclass(frozen=True)
class PathProtocol:
    mode: str = "single"
    lambda_values: tuple = (1.0,)
    mu_c_values: tuple = (1e-3,)
    warm_start: bool = True

    def __post_init__(self):
        if self.mode not in ("single", "lambda_path", "mu_path"):
            raise ConfigurationError(f"unknown path mode {self.mode!r}")
        if not self.lambda_values or not self.mu_c_values:
            raise ConfigurationError("path grids must be non-empty")
        object.__setattr__(self, "lambda_values", tuple(float(v) for v in self.lambda_values))
        object.__setattr__(self, "mu_c_values", tuple(float(v) for v in self.mu_c_values))

    @classmethod
    def single(cls, lam=1.0, mu_c=1e-3):
        return cls("single", (lam,), (mu_c,), False)

    @classmethod
    def lambda_path(cls, mu_c=1e-3, lambda_values=DEFAULT_LAMBDA_PATH, warm_start=True):
        return cls("lambda_path", tuple(lambda_values), (mu_c,), warm_start)

    @classmethod
    def mu_path(cls, mu_c=1e-3, lambda_values=DEFAULT_MU_LAMBDAS, k_max=100, warm_start=True):
        """``mu_c`` scaled by ``k = k_max, ..., 1`` for every ``lambda``."""
        return cls("mu_path", tuple(lambda_values),
                   tuple(k * mu_c for k in range(k_max, 0, -1)), warm_start)

    def segments(self):
        """Grid points grouped into independently warm-started sweeps."""
        if self.mode == "single":
            return [[(self.lambda_values[0], self.mu_c_values[0])]]
        if self.mode == "lambda_path":
            return [[(lam, self.mu_c_values[0]) for lam in self.lambda_values]]
        return [[(lam, mc) for mc in self.mu_c_values] for lam in self.lambda_values]


@dataclass
class RunRecord:
    problem: str
    m: int
    n: int
    lam: float
    mu_c: float
    mu: float
    solver: str
    nnz: int
    iterations: int
    time: float
    eta: float
    converged: bool
    gap_to_previous: float = float("nan")
    initial_eta: float = float("nan")
    warm_started: bool = False
    path_index: int = 1
    message: str = ""
    x: np.ndarray = field(default=None, repr=False)
    z: np.ndarray = field(default=None, repr=False)


def make_regularizer(kind, mu):
    if kind == NONNEG:
        return Regularizer.nonneg()
    return Regularizer(kind, mu)


def solve_one(p, solver="dssn", opts=None, x0=None, z0=None, apg_max_iter=100000):
    """Dispatch to one solver; returns ``(x, z, report)``.

    For the primal solvers ``z = Ax - b``, the dual point paired with ``x``.
    """
    opts = opts or SolverOptions()
    if solver == "dssn":
        return dssn.solve(p, opts, z0=z0)
    if solver == "pssn":
        x, rep = pssn.pssn_solve(p, opts, x0=x0)
    elif solver == "apg":
        x, rep = apg.apg_solve(p, eps=opts.eps, max_iter=apg_max_iter, x0=x0)
    else:
        raise ConfigurationError(f"unknown solver {solver!r}")
    return x, p.A @ x - p.b, rep


def run_path(dataset, protocol, solver="dssn", reg_kind="l1", opts=None,
             apg_max_iter=100000):
    """Execute ``protocol`` on ``dataset`` and return one record per grid point.

    With ``protocol.warm_start`` every solve after the first in a sweep starts
    from the previous solution: ``x`` for the primal solvers, ``z`` for DSSN.
    A failing solve yields a record with ``converged=False`` and the sweep
    goes on from the last successful point.
    """
    opts = opts or SolverOptions()
    A, b = dataset.A, dataset.b
    m, n = A.shape
    records = []
    for segment in protocol.segments():
        prev = None
        for l, (lam, mu_c) in enumerate(segment, start=1):
            if reg_kind == NONNEG:
                mu_c_used, mu = 0.0, 0.0
            else:
                mu_c_used, mu = mu_c, compute_mu(mu_c, A, b)
            p = ProblemData(A, b, lam, make_regularizer(reg_kind, mu))
            warm = protocol.warm_start and prev is not None
            x0 = prev.x if warm else None
            z0 = prev.z if warm else None
            init_eta = kkt_residual(p, x0 if warm else np.zeros(n))
            try:
                x, z, rep = solve_one(p, solver, opts, x0=x0, z0=z0,
                                      apg_max_iter=apg_max_iter)
            except (NumericalError, LineSearchError) as exc:
                rec = RunRecord(dataset.name, m, n, lam, mu_c_used, mu, solver, 0, 0,
                                0.0, float("nan"), False, initial_eta=init_eta,
                                warm_started=warm, path_index=l, message=str(exc))
                records.append(rec)
                continue
            rec = RunRecord(
                dataset.name, m, n, lam, mu_c_used, mu, solver,
                nnz=int(np.count_nonzero(np.abs(x) > NNZ_THRESHOLD)),
                iterations=rep.iterations, time=rep.wall_time, eta=rep.eta,
                converged=rep.converged, initial_eta=init_eta, warm_started=warm,
                path_index=l, message=rep.message, x=x, z=z)
            if prev is not None:
                rec.gap_to_previous = float(np.linalg.norm(x - prev.x))
            records.append(rec)
            prev = rec
    return records


def _fmt(v):
    return f"{v:.6g}"


def _row(rec):
    gap = "" if np.isnan(rec.gap_to_previous) else _fmt(rec.gap_to_previous)
    return [rec.problem, str(rec.m), str(rec.n), _fmt(rec.lam), _fmt(rec.mu_c),
            _fmt(rec.mu), rec.solver, str(rec.nnz), str(rec.iterations),
            _fmt(rec.time), f"{rec.eta:.6e}", "true" if rec.converged else "false",
            gap, f"{rec.initial_eta:.6e}", "true" if rec.warm_started else "false"]


def write_csv(records, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for rec in records:
        w.writerow(_row(rec))


def emit_csv(records, path):
    """One header row plus one row per record; reals to 6 significant digits."""
    with open(path, "w", newline="") as fh:
        write_csv(records, fh)


def emit_gap_trace(records, path):
    """Iterations and solution gap for every grid point after the first of a sweep."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("index", "iterations", "gap_to_previous", "lambda", "mu_c"))
        for rec in records:
            if rec.path_index < 2:
                continue
            w.writerow((rec.path_index, rec.iterations, f"{rec.gap_to_previous:.6e}",
                        _fmt(rec.lam), _fmt(rec.mu_c)))
