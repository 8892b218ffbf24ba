"""BiCGSTAB with right preconditioning.

Exactly two matvecs and two preconditioner applications per iteration; the
solution is updated through the preconditioned direction vectors, so the
recurrence runs entirely in x-space.  Breakdown guards compare the pivotal
inner products against ``breakdown_tol`` scaled by tracked vector norms and
return the best iterate so far.
"""

import numpy as np

from ..kernels import axpy, dot, norm2, spmv
from .common import Run, Status


def bicgstab(A, b, M=None, options=None, counters=None):
    """Solve A x = b; returns (x, SolveReport)."""
    run = Run(A, b, M, options, counters)
    opts = run.opts
    if run.bnorm == 0.0:
        return run.zero_rhs_report()

    x = run.initial_guess()
    if opts.x0 is None:
        r = run.b.copy()
    else:
        r = run.b - spmv(A, x, run.counters)
    rhat = r.copy()
    rhat_norm = norm2(rhat, run.counters)
    rnorm = rhat_norm
    run.record(rnorm / run.bnorm)
    if rnorm / run.bnorm <= opts.rtol and run.confirm(x):
        return run.finish(Status.CONVERGED, x, 0)

    n = x.shape[0]
    p = np.zeros(n)
    v = np.zeros(n)
    s = np.empty(n)
    rho_old = alpha = omega = 1.0

    for k in range(1, opts.max_iter + 1):
        rho = dot(rhat, r, run.counters)
        if abs(rho) <= opts.breakdown_tol * rhat_norm * rnorm:
            return run.finish(Status.BREAKDOWN, x, k - 1)
        beta = (rho / rho_old) * (alpha / omega)
        axpy(-omega, v, p, run.counters, out=p)
        p = axpy(beta, p, r, run.counters)
        phat = run.precondition(p)
        spmv(A, phat, run.counters, out=v)
        sigma = dot(rhat, v, run.counters)
        if sigma == 0.0:
            return run.finish(Status.BREAKDOWN, x, k - 1)
        alpha = rho / sigma
        axpy(-alpha, v, r, run.counters, out=s)
        shat = run.precondition(s)
        t = spmv(A, shat, run.counters)
        ts = dot(t, s, run.counters)
        tt = dot(t, t, run.counters)
        omega = ts / tt if tt != 0.0 else 0.0
        axpy(alpha, phat, x, run.counters, out=x)
        axpy(omega, shat, x, run.counters, out=x)
        axpy(-omega, t, s, run.counters, out=r)
        rho_old = rho
        rnorm = norm2(r, run.counters)
        run.record(rnorm / run.bnorm)
        if not np.isfinite(rnorm):
            return run.finish(Status.BREAKDOWN, x, k)
        if rnorm / run.bnorm <= opts.rtol and run.confirm(x):
            return run.finish(Status.CONVERGED, x, k)
        if omega == 0.0:
            return run.finish(Status.BREAKDOWN, x, k)
        if run.stagnated():
            return run.finish(Status.STAGNATED, x, k)
    return run.finish(Status.MAX_ITER, x, opts.max_iter)
