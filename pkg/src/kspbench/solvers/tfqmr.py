"""TFQMR with right preconditioning.

Each full iteration runs two half-steps and exactly two matvecs (the
direction refresh that textbook listings place at the end of an iteration is
deferred to the start of the next one, so stopping at an iteration boundary
never wastes a product).  The reported history is the quasi-residual bound
``tau * sqrt(m+1)`` after ``m`` half-steps, which is only trusted after an
explicit true-residual confirmation.
"""

import math

import numpy as np

from ..kernels import axpy, dot, norm2, spmv
from .common import Run, Status


def tfqmr(A, b, M=None, options=None, counters=None):
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
    rstar = r.copy()
    rho = dot(rstar, r, run.counters)
    r0norm = math.sqrt(max(rho, 0.0))
    tau = r0norm
    run.record(tau / run.bnorm)
    if tau / run.bnorm <= opts.rtol and run.confirm(x):
        return run.finish(Status.CONVERGED, x, 0)
    if rho == 0.0:
        return run.finish(Status.BREAKDOWN, x, 0)

    w = r.copy()
    u = r.copy()
    uhat = run.precondition(u)
    au = spmv(A, uhat, run.counters)  # A M^{-1} u, refreshed each half-step
    v = au.copy()
    d = np.zeros_like(x)  # x-space direction, accumulates M^{-1} u terms
    theta = eta = 0.0
    alpha = 1.0
    wnorm = tau

    def half_step_update(uhat_m):
        """Shared tail of a half-step: w, d, tau, and the iterate update."""
        nonlocal theta, eta, tau
        axpy(-alpha, au, w, run.counters, out=w)
        factor = theta * theta * eta / alpha
        axpy(factor, d, uhat_m, run.counters, out=d)  # d <- uhat + factor*d
        new_wnorm = norm2(w, run.counters)
        theta = new_wnorm / tau
        c = 1.0 / math.sqrt(1.0 + theta * theta)
        tau = tau * theta * c
        eta = c * c * alpha
        axpy(eta, d, x, run.counters, out=x)
        return new_wnorm

    for k in range(1, opts.max_iter + 1):
        if k > 1:
            # deferred direction refresh (textbook end-of-iteration updates)
            rho_new = dot(rstar, w, run.counters)
            if abs(rho_new) <= opts.breakdown_tol * r0norm * wnorm:
                return run.finish(Status.BREAKDOWN, x, k - 1)
            beta = rho_new / rho
            rho = rho_new
            u = axpy(beta, u, w, run.counters)
            uhat = run.precondition(u)
            au_new = spmv(A, uhat, run.counters)
            axpy(beta, v, au, run.counters, out=v)
            v = axpy(beta, v, au_new, run.counters)
            au = au_new

        # first (even) half-step
        sigma = dot(rstar, v, run.counters)
        if sigma == 0.0:
            return run.finish(Status.BREAKDOWN, x, k - 1)
        alpha = rho / sigma
        u_next = axpy(-alpha, v, u, run.counters)
        wnorm = half_step_update(uhat)
        if not np.isfinite(wnorm):
            return run.finish(Status.BREAKDOWN, x, k)
        if tau <= opts.breakdown_tol * r0norm:
            # exact-arithmetic termination (invariant subspace hit)
            run.record(tau * math.sqrt(2.0 * k) / run.bnorm)
            if run.confirm(x):
                return run.finish(Status.CONVERGED, x, k)
            return run.finish(Status.BREAKDOWN, x, k)

        # second (odd) half-step
        u = u_next
        uhat = run.precondition(u)
        au = spmv(A, uhat, run.counters)
        wnorm = half_step_update(uhat)
        bound = tau * math.sqrt(2.0 * k + 1.0) / run.bnorm
        run.record(bound)
        if not np.isfinite(wnorm):
            return run.finish(Status.BREAKDOWN, x, k)
        if bound <= opts.rtol and run.confirm(x):
            return run.finish(Status.CONVERGED, x, k)
        if run.stagnated():
            return run.finish(Status.STAGNATED, x, k)
    return run.finish(Status.MAX_ITER, x, opts.max_iter)
