from .common import SolveOptions, SolveReport, Status
from .gmres import gmres_restarted
from .bicgstab import bicgstab
from .tfqmr import tfqmr
from .qmrcgstab import qmrcgstab

SOLVER_IDS = ("gmres", "bicgstab", "tfqmr", "qmrcgstab")

_DISPATCH = {
    "gmres": gmres_restarted,
    "bicgstab": bicgstab,
    "tfqmr": tfqmr,
    "qmrcgstab": qmrcgstab,
}


def solve(solver_id, A, b, M=None, options=None, counters=None):
    """Run a solver by its CLI identifier."""
    try:
        fn = _DISPATCH[solver_id]
    except KeyError:
        raise ValueError(f"unknown solver id {solver_id!r}") from None
    return fn(A, b, M=M, options=options, counters=counters)
