"""Shared solver contracts: options, reports, and the run scaffolding.

Conventions shared by all four solvers:

* right preconditioning only; the recurrences run on ``A M^{-1}`` and every
  solution update is applied in x-space through already-computed
  ``M^{-1}``-images, so no extra preconditioner applications are needed;
* a Converged exit requires the recurrence (or quasi-residual) estimate to
  reach ``rtol`` *and* an explicit true-residual confirmation; the
  confirmation matvec is bookkeeping and stays outside the operation
  counters, which audit the per-iteration cost model only;
* histories are keyed by cumulative matvec count and are bitwise
  deterministic for identical inputs.
"""

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import DimensionMismatch
from ..kernels import OpCounters

STAGNATION_IMPROVEMENT = 1e-8
STAGNATION_WINDOW = 1000  # iterations, non-restarted solvers


class Status(Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    BREAKDOWN = "breakdown"
    STAGNATED = "stagnated"
    ZERO_RHS = "zero_rhs"

    def __str__(self):
        return self.value


@dataclass
class SolveOptions:
    """Run configuration; defaults follow the benchmark protocol."""

    rtol: float = 1e-10
    max_iter: int = 10000
    restart: int = 30  # GMRES only
    x0: np.ndarray | None = None
    breakdown_tol: float = 1e-14

    def validate(self):
        if self.rtol <= 0.0:
            raise ValueError("rtol must be positive")
        if self.max_iter < 1 or self.restart < 1:
            raise ValueError("max_iter and restart must be >= 1")


@dataclass
class SolveReport:
    """Full convergence record of one solve."""

    status: Status
    iterations: int
    history: list = field(default_factory=list)  # (matvec_count, relres)
    true_relres: float = 0.0
    counters: OpCounters = field(default_factory=OpCounters)
    setup_seconds: float = 0.0
    solve_seconds: float = 0.0

    @property
    def final_relres(self):
        return self.history[-1][1]

    @property
    def matvecs(self):
        return self.counters.matvecs


class Run:
    """Per-solve workspace shared by the four methods."""

    def __init__(self, A, b, M, options, counters):
        if A.n_rows != A.n_cols:
            raise DimensionMismatch("solver requires a square matrix")
        if b.shape != (A.n_rows,):
            raise DimensionMismatch(f"rhs length {b.shape} != {A.n_rows}")
        options = options or SolveOptions()
        options.validate()
        self.A = A
        self.b = np.asarray(b, dtype=np.float64)
        self.M = M
        self.opts = options
        self.counters = counters if counters is not None else OpCounters()
        self.history = []
        self.t0 = time.perf_counter()
        self.bnorm = float(np.linalg.norm(self.b))
        self.confirmed = None  # true relres from the accepting confirmation

    def initial_guess(self):
        if self.opts.x0 is None:
            return np.zeros(self.A.n_rows)
        x0 = np.asarray(self.opts.x0, dtype=np.float64)
        if x0.shape != self.b.shape:
            raise DimensionMismatch("x0 length does not match the system")
        return x0.copy()

    def precondition(self, v):
        """M^{-1} v; the result must be treated read-only by callers."""
        return v if self.M is None else self.M.apply(v)

    def record(self, relres):
        self.history.append((self.counters.matvecs, float(relres)))

    def confirm(self, x):
        """Explicit uncounted residual check backing a Converged exit."""
        r = self.b - self.A.matvec(x)
        true_relres = float(np.linalg.norm(r)) / self.bnorm
        if true_relres <= self.opts.rtol:
            self.confirmed = true_relres
            return True
        return False

    def stagnated(self, window=STAGNATION_WINDOW):
        """No meaningful progress across the trailing window of iterations."""
        if len(self.history) <= window:
            return False
        recent = self.history[-1][1]
        past = self.history[-1 - window][1]
        return recent > past * (1.0 - STAGNATION_IMPROVEMENT)

    def zero_rhs_report(self):
        self.record(0.0)
        report = SolveReport(status=Status.ZERO_RHS, iterations=0,
                             history=self.history, true_relres=0.0,
                             counters=self.counters,
                             setup_seconds=self._setup_seconds(),
                             solve_seconds=time.perf_counter() - self.t0)
        return np.zeros(self.A.n_rows), report

    def finish(self, status, x, iterations):
        if self.confirmed is not None and status is Status.CONVERGED:
            true_relres = self.confirmed
        else:
            r = self.b - self.A.matvec(x)
            true_relres = float(np.linalg.norm(r)) / self.bnorm
        report = SolveReport(status=status, iterations=iterations,
                             history=self.history, true_relres=true_relres,
                             counters=self.counters,
                             setup_seconds=self._setup_seconds(),
                             solve_seconds=time.perf_counter() - self.t0)
        return x, report

    def _setup_seconds(self):
        return 0.0 if self.M is None else self.M.setup_seconds
