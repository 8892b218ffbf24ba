"""Benchmark command line.

Subcommands: ``gen`` (write a generated matrix/RHS as Matrix Market),
``solve`` (one case, history + summary CSVs), ``suite`` (JSON-configured
case grid), ``sweep`` (scalability over increasing sizes).

Exit codes: 0 every case converged, 2 some case did not, 1 bad
configuration or I/O.
"""

import argparse
import json
import os
import sys

from ..errors import ConfigError, KspBenchError
from ..mmio import write_matrix_market, write_vector_market
from ..problems import FAMILIES, ProblemSpec, generate
from ..precond import PRECOND_IDS
from ..solvers import SOLVER_IDS, SolveOptions
from .csvio import emit_history_csv, emit_summary_csv, summary_row, SUMMARY_HEADER
from .runner import CaseConfig, run_case, run_suite, scalability_sweep


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _parse_c(text):
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"bad convection vector {text!r}") from None


def build_parser():
    parser = _Parser(prog="kspbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a test matrix")
    gen.add_argument("--problem", required=True, choices=FAMILIES)
    gen.add_argument("--n", required=True, type=int, help="grid lines per dimension")
    gen.add_argument("--c", default="1,1", help="convection coefficients, comma separated")
    gen.add_argument("--d", default=0.0, type=float, help="reaction coefficient")
    gen.add_argument("--scheme", choices=("centered", "upwind"), default=None)
    gen.add_argument("--stretch", default=1.0, type=float)
    gen.add_argument("--out", required=True, help="matrix output path (.mtx)")
    gen.add_argument("--rhs", default=None, help="also write the manufactured RHS here")

    solve_p = sub.add_parser("solve", help="run one solver/preconditioner case")
    solve_p.add_argument("--matrix", required=True)
    solve_p.add_argument("--rhs", default=None, help="RHS file; defaults to A @ ones")
    solve_p.add_argument("--solver", required=True, choices=SOLVER_IDS)
    solve_p.add_argument("--precond", default="none", choices=PRECOND_IDS)
    solve_p.add_argument("--omega", default=1.0, type=float, help="SOR relaxation")
    solve_p.add_argument("--theta", default=0.08, type=float, help="SA strength threshold")
    solve_p.add_argument("--strong-threshold", default=0.25, type=float,
                         help="classical AMG strength threshold")
    solve_p.add_argument("--rtol", default=1e-10, type=float)
    solve_p.add_argument("--max-iter", default=10000, type=int)
    solve_p.add_argument("--restart", default=30, type=int)
    solve_p.add_argument("--history", default=None, help="history CSV path")
    solve_p.add_argument("--summary", default=None, help="summary CSV path")

    suite = sub.add_parser("suite", help="run a JSON-configured case suite")
    suite.add_argument("--config", required=True)
    suite.add_argument("--out-dir", required=True)
    suite.add_argument("--parallel", action="store_true")

    sweep = sub.add_parser("sweep", help="scalability sweep over sizes")
    sweep.add_argument("--problem", required=True, choices=FAMILIES)
    sweep.add_argument("--sizes", required=True, help="comma separated per-dim sizes")
    sweep.add_argument("--solver", required=True, choices=SOLVER_IDS)
    sweep.add_argument("--precond", required=True, choices=PRECOND_IDS)
    sweep.add_argument("--c", default="0,0")
    sweep.add_argument("--d", default=0.0, type=float)
    sweep.add_argument("--scheme", choices=("centered", "upwind"), default=None)
    sweep.add_argument("--stretch", default=1.0, type=float)
    sweep.add_argument("--rtol", default=1e-10, type=float)
    sweep.add_argument("--max-iter", default=10000, type=int)
    sweep.add_argument("--restart", default=30, type=int)
    sweep.add_argument("--out", required=True, help="sweep CSV path")
    return parser


def _cmd_gen(args):
    spec = ProblemSpec(family=args.problem, n_per_dim=args.n, c=_parse_c(args.c),
                       d=args.d, scheme=args.scheme, stretch=args.stretch)
    prob = generate(spec)
    write_matrix_market(prob.A, args.out, comment=spec.label())
    print(f"wrote {args.out}: n={prob.A.n_rows} nnz={prob.A.nnz}")
    if args.rhs:
        write_vector_market(prob.b, args.rhs, comment=f"{spec.label()} rhs (A @ ones)")
        print(f"wrote {args.rhs}")
    return 0


def _case_from_solve_args(args):
    options = SolveOptions(rtol=args.rtol, max_iter=args.max_iter,
                           restart=args.restart)
    rhs = f"file:{args.rhs}" if args.rhs else "manufactured:ones"
    return CaseConfig(case_id=os.path.basename(args.matrix),
                      solver=args.solver, precond=args.precond,
                      matrix_path=args.matrix, rhs=rhs, omega=args.omega,
                      theta=args.theta, strong_threshold=args.strong_threshold,
                      options=options)


def _cmd_solve(args):
    record = run_case(_case_from_solve_args(args))
    if record.error and record.iterations == 0 and record.status == "error":
        print(f"error: {record.error}", file=sys.stderr)
        return 1
    print(SUMMARY_HEADER)
    print(summary_row(record))
    if record.error:
        print(f"note: {record.error}", file=sys.stderr)
    if args.history:
        emit_history_csv(record, args.history)
    if args.summary:
        emit_summary_csv([record], args.summary)
    return 0 if record.converged else 2


def _suite_configs(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    cases = data.get("cases")
    if not isinstance(cases, list):
        raise ConfigError(f"{path}: expected top-level 'cases' list")
    configs = []
    for entry in cases:
        try:
            case_id = entry["case_id"]
            matrix = entry["matrix"]
            solver = entry["solver"]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"{path}: case missing field {exc}") from exc
        options = SolveOptions(rtol=entry.get("rtol", 1e-10),
                               max_iter=entry.get("max_iter", 10000),
                               restart=entry.get("restart", 30))
        kwargs = dict(case_id=case_id, solver=solver,
                      precond=entry.get("precond", "none"),
                      rhs=entry.get("rhs", "manufactured:ones"),
                      omega=entry.get("omega", 1.0),
                      theta=entry.get("theta", 0.08),
                      strong_threshold=entry.get("strong_threshold", 0.25),
                      options=options)
        if "path" in matrix:
            configs.append(CaseConfig(matrix_path=matrix["path"], **kwargs))
        else:
            try:
                spec = ProblemSpec(family=matrix["problem"],
                                   n_per_dim=matrix["n"],
                                   c=tuple(matrix.get("c", (1.0, 1.0))),
                                   d=matrix.get("d", 0.0),
                                   scheme=matrix.get("scheme"),
                                   stretch=matrix.get("stretch", 1.0))
            except (KeyError, KspBenchError) as exc:
                raise ConfigError(f"{path}: case {case_id}: {exc}") from exc
            configs.append(CaseConfig(problem=spec, **kwargs))
    return configs


def _cmd_suite(args):
    configs = _suite_configs(args.config)
    os.makedirs(args.out_dir, exist_ok=True)
    records = run_suite(configs, parallel=args.parallel)
    emit_summary_csv(records, os.path.join(args.out_dir, "summary.csv"))
    for rec in records:
        emit_history_csv(rec, os.path.join(args.out_dir, f"history_{rec.case_id}.csv"))
    meta = {"parallel": args.parallel,
            "timing_comparable": all(r.timing_comparable for r in records)}
    with open(os.path.join(args.out_dir, "run_meta.json"), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
    if args.parallel:
        print("note: parallel run; timing columns are not comparable", file=sys.stderr)
    bad = [r.case_id for r in records if not r.converged]
    for rec in records:
        print(summary_row(rec))
    if bad:
        print(f"non-converged cases: {', '.join(bad)}", file=sys.stderr)
        return 2
    return 0


def _cmd_sweep(args):
    try:
        sizes = [int(t) for t in args.sizes.split(",")]
    except ValueError:
        raise ConfigError(f"bad sizes {args.sizes!r}") from None
    options = SolveOptions(rtol=args.rtol, max_iter=args.max_iter,
                           restart=args.restart)
    result = scalability_sweep(args.problem, sizes, args.solver, args.precond,
                               c=_parse_c(args.c), d=args.d, scheme=args.scheme,
                               stretch=args.stretch, options=options)
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write("n,iterations,matvecs,setup_s,solve_s,status\n")
        for row in result.rows:
            fh.write(f"{row['n']},{row['iterations']},{row['matvecs']},"
                     f"{row['setup_s']!r},{row['solve_s']!r},{row['status']}\n")
    print(f"time slope (log-log, converged sizes): {result.time_slope}")
    print(f"iteration growth ratios: {result.iteration_ratios}")
    non_conv = [r for r in result.rows if r["status"] not in ("converged", "zero_rhs")]
    return 2 if non_conv else 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "suite":
            return _cmd_suite(args)
        return _cmd_sweep(args)
    except (ConfigError, KspBenchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
