"""QMRCGSTAB with right preconditioning.

A BiCGSTAB-type recurrence whose iterates are smoothed by quasi-minimal
residual updates after each half-step, giving a much smoother convergence
history at the cost of two extra axpys and two extra inner products per
iteration.  The reported history is the quasi-residual bound
``tau * sqrt(2k+1)`` and every Converged exit is confirmed against the true
residual.
"""

import math

import numpy as np

from ..kernels import axpy, dot, norm2, spmv
from .common import Run, Status


def qmrcgstab(A, b, M=None, options=None, counters=None):
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
    rstar_norm = norm2(rstar, run.counters)
    rnorm = tau = rstar_norm
    run.record(tau / run.bnorm)
    if tau / run.bnorm <= opts.rtol and run.confirm(x):
        return run.finish(Status.CONVERGED, x, 0)

    n = x.shape[0]
    p = np.zeros(n)
    v = np.zeros(n)
    s = np.empty(n)
    d = np.zeros(n)  # x-space quasi-minimization direction
    rho_old = alpha = omega = 1.0
    theta = eta = 0.0

    for k in range(1, opts.max_iter + 1):
        rho = dot(rstar, r, run.counters)
        if abs(rho) <= opts.breakdown_tol * rstar_norm * rnorm:
            return run.finish(Status.BREAKDOWN, x, k - 1)
        beta = (rho / rho_old) * (alpha / omega)
        axpy(-omega, v, p, run.counters, out=p)
        p = axpy(beta, p, r, run.counters)
        phat = run.precondition(p)
        spmv(A, phat, run.counters, out=v)
        sigma = dot(rstar, v, run.counters)
        if sigma == 0.0:
            return run.finish(Status.BREAKDOWN, x, k - 1)
        alpha = rho / sigma
        axpy(-alpha, v, r, run.counters, out=s)

        # first quasi-minimization (after the CG half-step)
        snorm = norm2(s, run.counters)
        theta1 = snorm / tau
        c = 1.0 / math.sqrt(1.0 + theta1 * theta1)
        tau1 = tau * theta1 * c
        eta1 = c * c * alpha
        axpy(theta * theta * eta / alpha, d, phat, run.counters, out=d)
        axpy(eta1, d, x, run.counters, out=x)

        shat = run.precondition(s)
        t = spmv(A, shat, run.counters)
        ts = dot(t, s, run.counters)
        tt = dot(t, t, run.counters)
        omega = ts / tt if tt != 0.0 else 0.0
        if omega == 0.0:
            # stabilization step degenerate; the half-step iterate may
            # already be exact (s == 0), otherwise this is a breakdown
            run.record(tau1 * math.sqrt(2.0 * k) / run.bnorm)
            if run.confirm(x):
                return run.finish(Status.CONVERGED, x, k)
            return run.finish(Status.BREAKDOWN, x, k)
        axpy(-omega, t, s, run.counters, out=r)
        rho_old = rho

        # second quasi-minimization (after the stabilization half-step)
        rnorm = norm2(r, run.counters)
        theta = rnorm / tau1
        c = 1.0 / math.sqrt(1.0 + theta * theta)
        tau = tau1 * theta * c
        eta = c * c * omega
        axpy(theta1 * theta1 * eta1 / omega, d, shat, run.counters, out=d)
        axpy(eta, d, x, run.counters, out=x)

        bound = tau * math.sqrt(2.0 * k + 1.0) / run.bnorm
        run.record(bound)
        if not np.isfinite(rnorm):
            return run.finish(Status.BREAKDOWN, x, k)
        if bound <= opts.rtol and run.confirm(x):
            return run.finish(Status.CONVERGED, x, k)
        if run.stagnated():
            return run.finish(Status.STAGNATED, x, k)
    return run.finish(Status.MAX_ITER, x, opts.max_iter)
