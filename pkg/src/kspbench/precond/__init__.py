from .basic import (Preconditioner, identity_setup, jacobi_setup, gs_setup,
                    sor_setup, gs_sor_apply)
from .ilu import IluFactors, ilu0_factor, ilu_apply, ilu0_setup
from .amg import (AmgHierarchy, AmgParams, sa_amg_setup, rs_amg_setup,
                  amg_vcycle, hierarchy_table)

PRECOND_IDS = ("none", "jacobi", "gs", "sor", "ilu0", "sa-amg", "c-amg")


def build(precond_id, A, omega=1.5, theta=0.08, strong_threshold=0.25,
          shift_pivots=False):
    """Build a preconditioner for A by its CLI identifier."""
    if precond_id == "none":
        return identity_setup(A)
    if precond_id == "jacobi":
        return jacobi_setup(A)
    if precond_id == "gs":
        return gs_setup(A)
    if precond_id == "sor":
        return sor_setup(A, omega)
    if precond_id == "ilu0":
        return ilu0_setup(A, shift_pivots=shift_pivots)
    if precond_id == "sa-amg":
        return sa_amg_setup(A, AmgParams(theta=theta))
    if precond_id == "c-amg":
        return rs_amg_setup(A, strong_threshold=strong_threshold)
    raise ValueError(f"unknown preconditioner id {precond_id!r}")
