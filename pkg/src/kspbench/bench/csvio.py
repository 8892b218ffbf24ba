"""CSV emission with pinned schemas and shortest-round-trip floats."""

from ..errors import KspBenchError

HISTORY_HEADER = "matvecs,relres"
SUMMARY_HEADER = ("case_id,matrix,n,nnz,solver,precond,status,iterations,"
                  "matvecs,relres,true_relres,setup_s,solve_s,predicted_flops")


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_history_csv(record, path):
    """One `matvecs,relres` row per recorded iteration."""
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(HISTORY_HEADER + "\n")
            for matvecs, relres in record.history:
                fh.write(f"{matvecs},{_fmt(float(relres))}\n")
    except OSError as exc:
        raise KspBenchError(f"cannot write history CSV {path}: {exc}") from exc


def summary_row(rec):
    return ",".join(_fmt(v) for v in (
        rec.case_id, rec.matrix_label, rec.n, rec.nnz, rec.solver, rec.precond,
        rec.status, rec.iterations, rec.matvecs, float(rec.relres),
        float(rec.true_relres), float(rec.setup_s), float(rec.solve_s),
        float(rec.predicted_flops)))


def emit_summary_csv(records, path):
    """One row per case in the pinned summary schema."""
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(SUMMARY_HEADER + "\n")
            for rec in records:
                fh.write(summary_row(rec) + "\n")
    except OSError as exc:
        raise KspBenchError(f"cannot write summary CSV {path}: {exc}") from exc
