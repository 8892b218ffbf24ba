"""Case runner: build matrix + preconditioner, solve, audit, record.

A case never aborts a suite: preconditioner and solver failures are folded
into the record's status/error fields.  Suites can fan out across processes;
records are merged in case_id order and their timings flagged as
non-comparable when run in parallel.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .. import precond as precond_mod
from ..errors import ConfigError, KspBenchError
from ..kernels import OpCounters
from ..mmio import read_matrix_market, read_vector_market
from ..problems import ProblemSpec, generate, manufactured_rhs
from ..solvers import SOLVER_IDS, SolveOptions, Status, solve
from .model import predicted_totals


@dataclass
class CaseConfig:
    case_id: str
    solver: str
    precond: str = "none"
    matrix_path: str | None = None
    problem: ProblemSpec | None = None
    rhs: str = "manufactured:ones"  # manufactured:{ones,sinsin} | uniform | file:<path>
    omega: float = 1.0
    theta: float = 0.08
    strong_threshold: float = 0.25
    options: SolveOptions = field(default_factory=SolveOptions)

    def validate(self):
        if self.solver not in SOLVER_IDS:
            raise ConfigError(f"{self.case_id}: unknown solver {self.solver!r}")
        if self.precond not in precond_mod.PRECOND_IDS:
            raise ConfigError(f"{self.case_id}: unknown preconditioner {self.precond!r}")
        if (self.matrix_path is None) == (self.problem is None):
            raise ConfigError(f"{self.case_id}: exactly one matrix source required")


@dataclass
class CaseRecord:
    case_id: str
    solver: str
    precond: str
    matrix_label: str
    n: int = 0
    nnz: int = 0
    status: str = "error"
    iterations: int = 0
    matvecs: int = 0
    relres: float = float("nan")
    true_relres: float = float("nan")
    setup_s: float = 0.0
    solve_s: float = 0.0
    predicted_flops: float = 0.0
    history: list = field(default_factory=list)
    counters: OpCounters = field(default_factory=OpCounters)
    solution_error: float = float("nan")  # vs x_exact when available
    audit: dict = field(default_factory=dict)
    error: str = ""
    timing_comparable: bool = True

    @property
    def converged(self):
        return self.status in ("converged", "zero_rhs")


def _load_case_matrix(config):
    if config.matrix_path is not None:
        A = read_matrix_market(config.matrix_path)
        return A, config.matrix_path, None
    prob = generate(config.problem)
    return prob.A, config.problem.label(), prob


def _case_rhs(config, A, prob):
    if config.rhs.startswith("manufactured:"):
        pattern = config.rhs.split(":", 1)[1]
        coords = prob.meta.get("coords") if prob is not None else None
        b, x_exact = manufactured_rhs(A, pattern, coords)
        return b, x_exact
    if config.rhs == "uniform":
        return np.ones(A.n_rows), None
    if config.rhs.startswith("file:"):
        return read_vector_market(config.rhs.split(":", 1)[1]), None
    raise ConfigError(f"{config.case_id}: unknown rhs mode {config.rhs!r}")


def _audit_counters(config, report):
    """Compare measured kernel counts against the per-iteration cost model."""
    iters = report.iterations
    if iters == 0:
        return {}
    restart = config.options.restart
    expect_matvec = 1 if config.solver == "gmres" else 2
    _, axpys, dots = predicted_totals(config.solver, 1, 1, iters, restart)
    c = report.counters
    return {
        "matvecs_per_iter": c.matvecs / iters,
        "matvec_exact": c.matvecs == expect_matvec * iters,
        "axpy_measured": c.axpys,
        "axpy_predicted": axpys,
        "axpy_dev_per_iter": abs(c.axpys - axpys) / iters,
        "dot_measured": c.dots,
        "dot_predicted": dots,
        "dot_dev_per_iter": abs(c.dots - dots) / iters,
    }


def run_case(config):
    """Run one (matrix, solver, preconditioner) case; never raises for
    solver-side failures."""
    config.validate()
    record = CaseRecord(case_id=config.case_id, solver=config.solver,
                        precond=config.precond, matrix_label="<unloaded>")
    try:
        A, label, prob = _load_case_matrix(config)
    except (KspBenchError, OSError) as exc:
        record.error = f"matrix: {exc}"
        return record
    record.matrix_label = label
    record.n, record.nnz = A.n_rows, A.nnz
    try:
        b, x_exact = _case_rhs(config, A, prob)
    except (KspBenchError, OSError) as exc:
        record.error = f"rhs: {exc}"
        return record

    t0 = time.perf_counter()
    try:
        M = precond_mod.build(config.precond, A, omega=config.omega,
                              theta=config.theta,
                              strong_threshold=config.strong_threshold)
    except KspBenchError as exc:
        record.status = str(Status.BREAKDOWN)
        record.error = f"preconditioner: {exc}"
        record.setup_s = time.perf_counter() - t0
        return record

    counters = OpCounters()
    x, report = solve(config.solver, A, b, M=M, options=config.options,
                      counters=counters)
    record.status = str(report.status)
    record.iterations = report.iterations
    record.matvecs = report.counters.matvecs
    record.relres = report.final_relres
    record.true_relres = report.true_relres
    record.setup_s = report.setup_seconds
    record.solve_s = report.solve_seconds
    record.history = report.history
    record.counters = report.counters
    record.predicted_flops, _, _ = predicted_totals(
        config.solver, A.n_rows, A.avg_row_nnz, report.iterations,
        config.options.restart)
    record.audit = _audit_counters(config, report)
    if x_exact is not None and np.max(np.abs(x_exact)) > 0:
        record.solution_error = float(np.max(np.abs(x - x_exact))
                                      / np.max(np.abs(x_exact)))
    return record


def run_suite(configs, parallel=False, max_workers=None):
    """Run every case; per-case errors are embedded, never raised.

    Records come back sorted by case_id.  With ``parallel=True`` the timing
    fields are flagged non-comparable on every record.
    """
    ids = [c.case_id for c in configs]
    dupes = {i for i in ids if ids.count(i) > 1}
    if dupes:
        raise ConfigError(f"duplicate case ids: {sorted(dupes)}")
    for config in configs:
        config.validate()
    if parallel and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            records = list(pool.map(run_case, configs))
        for rec in records:
            rec.timing_comparable = False
    else:
        records = [run_case(c) for c in configs]
    return sorted(records, key=lambda r: r.case_id)


def loglog_slope(xs, ys):
    """Least-squares slope of log(y) against log(x)."""
    lx, ly = np.log(np.asarray(xs, dtype=float)), np.log(np.asarray(ys, dtype=float))
    lx -= lx.mean()
    return float((lx @ (ly - ly.mean())) / (lx @ lx))


@dataclass
class SweepResult:
    family: str
    solver: str
    precond: str
    rows: list  # dicts: n, iterations, matvecs, setup_s, solve_s, status
    time_slope: float = float("nan")
    iteration_ratios: list = field(default_factory=list)


def scalability_sweep(family, sizes, solver, precond, c=(1.0, 1.0), d=0.0,
                      scheme=None, stretch=1.0, options=None):
    """Solve one problem family at increasing sizes and fit the timing slope.

    ``sizes`` are per-dimension counts (at least three, increasing).  The
    log-log slope of total seconds against unknown count is fit over the
    converged sizes only; failures stay in the table.
    """
    sizes = list(sizes)
    if len(sizes) < 3 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError("sweep needs >= 3 strictly increasing sizes")
    rows = []
    for n in sizes:
        spec = ProblemSpec(family=family, n_per_dim=n, c=c, d=d,
                           scheme=scheme, stretch=stretch)
        opts = replace(options) if options is not None else SolveOptions()
        config = CaseConfig(case_id=f"{family}-{n}", solver=solver,
                            precond=precond, problem=spec, options=opts)
        rec = run_case(config)
        rows.append({"n": rec.n, "iterations": rec.iterations,
                     "matvecs": rec.matvecs, "setup_s": rec.setup_s,
                     "solve_s": rec.solve_s, "status": rec.status})
    ok = [r for r in rows if r["status"] == "converged"]
    result = SweepResult(family, solver, precond, rows)
    if len(ok) >= 2:
        result.time_slope = loglog_slope([r["n"] for r in ok],
                                         [r["setup_s"] + r["solve_s"] for r in ok])
    # growth ratios use every adjacent pair: a stagnated or capped run still
    # reports how many iterations it spent
    result.iteration_ratios = [
        b["iterations"] / a["iterations"]
        for a, b in zip(rows, rows[1:]) if a["iterations"] > 0]
    return result
