"""Restarted GMRES with right preconditioning.

Per inner iteration: exactly one matvec with ``A`` (the operator is
``A M^{-1}``), a modified Gram-Schmidt expansion, and an incremental Givens
update of the Hessenberg least-squares problem.  The residual reported per
iteration is the Givens recurrence value; the restart residual is rebuilt
from the Arnoldi relation without extra matvecs.
"""

import numpy as np

from ..kernels import axpy, norm2, scale, spmv
from .arnoldi import ArnoldiState, HappyBreakdown, arnoldi_step, givens_lsq_update
from .common import STAGNATION_IMPROVEMENT, Run, Status


def _apply_update(run, state, x):
    """x += M^{-1} (Q z) with z from back substitution; returns (x, z)."""
    z = state.solve_coefficients()
    if z.size == 0:
        return x, z
    y = np.zeros(x.shape[0])
    for i in range(z.shape[0]):
        axpy(z[i], state.basis[i], y, run.counters, out=y)
    u = run.precondition(y)
    axpy(1.0, u, x, run.counters, out=x)
    return x, z


def _restart_residual(run, state, beta, z):
    """r = Q_{k+1} (beta e1 - H~ z): the Arnoldi relation, no matvec needed."""
    k = state.k
    d = -state.hess[:k + 1, :k] @ z
    d[0] += beta
    r = np.zeros(run.b.shape[0])
    for i in range(k + 1):
        axpy(d[i], state.basis[i], r, run.counters, out=r)
    return r


def gmres_restarted(A, b, M=None, options=None, counters=None):
    """Solve A x = b by GMRES(restart) with right preconditioner M.

    Returns ``(x, SolveReport)``.  Breakdown is reported only when the
    Krylov space becomes invariant while the system is still unresolved;
    stagnation is declared when a full restart cycle improves the relative
    residual by less than 1e-8.
    """
    run = Run(A, b, M, options, counters)
    opts = run.opts
    if run.bnorm == 0.0:
        return run.zero_rhs_report()

    x = run.initial_guess()
    if opts.x0 is None:
        r = run.b.copy()
    else:
        r = run.b - spmv(A, x, run.counters)
    rnorm = norm2(r, run.counters)
    run.record(rnorm / run.bnorm)
    if rnorm / run.bnorm <= opts.rtol and run.confirm(x):
        return run.finish(Status.CONVERGED, x, 0)

    def op(q):
        return spmv(A, run.precondition(q), run.counters)

    iterations = 0
    while True:
        beta = rnorm
        q1 = scale(1.0 / beta, r, run.counters)
        state = ArnoldiState(q1, beta, opts.restart)
        cycle_start = rnorm / run.bnorm
        happy = False
        while state.k < opts.restart and iterations < opts.max_iter:
            try:
                arnoldi_step(op, state, run.counters, opts.breakdown_tol)
            except HappyBreakdown:
                happy = True
            rho = givens_lsq_update(state)
            iterations += 1
            run.record(rho / run.bnorm)
            if rho / run.bnorm <= opts.rtol or happy:
                break

        x, z = _apply_update(run, state, x)
        relres = state.current_residual_norm() / run.bnorm
        if relres <= opts.rtol:
            if run.confirm(x):
                return run.finish(Status.CONVERGED, x, iterations)
            # the recurrence is exhausted but the true residual disagrees
            # (severely ill-conditioned M): no further progress is possible
            return run.finish(Status.STAGNATED, x, iterations)
        if happy:
            # invariant subspace reached without an acceptable solution
            return run.finish(Status.BREAKDOWN, x, iterations)
        if iterations >= opts.max_iter:
            return run.finish(Status.MAX_ITER, x, iterations)

        r = _restart_residual(run, state, beta, z)
        rnorm = norm2(r, run.counters)
        if rnorm == 0.0:
            return run.finish(Status.STAGNATED, x, iterations)
        relres = rnorm / run.bnorm
        if (state.k == opts.restart and relres > opts.rtol
                and relres > cycle_start * (1.0 - STAGNATION_IMPROVEMENT)):
            return run.finish(Status.STAGNATED, x, iterations)
