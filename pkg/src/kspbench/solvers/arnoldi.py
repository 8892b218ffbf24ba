"""Arnoldi iteration with modified Gram-Schmidt and incremental Givens QR.

One restart cycle of GMRES owns one ``ArnoldiState``.  The basis expansion
(``arnoldi_step``) and the least-squares update (``givens_lsq_update``) are
separate so each can be tested against dense oracles.
"""

import math

import numpy as np

from ..kernels import axpy, dot, norm2, scale

REORTH_FACTOR = 0.5  # re-orthogonalize when MGS removed half the mass


class HappyBreakdown(Exception):
    """The Krylov subspace became invariant: exact solve available."""


class ArnoldiState:
    """Orthonormal basis, Hessenberg columns, and Givens-rotated LSQ data."""

    def __init__(self, q1, beta, max_dim):
        n = q1.shape[0]
        self.max_dim = max_dim
        self.basis = np.zeros((max_dim + 1, n))
        self.basis[0] = q1
        self.hess = np.zeros((max_dim + 1, max_dim))     # original entries
        self.rotated = np.zeros((max_dim + 1, max_dim))  # after Givens
        self.cos = np.zeros(max_dim)
        self.sin = np.zeros(max_dim)
        self.g = np.zeros(max_dim + 1)
        self.g[0] = beta
        self.k = 0  # completed columns

    def current_residual_norm(self):
        return abs(self.g[self.k])

    def solve_coefficients(self):
        """Back substitution on the rotated triangle; only done on demand."""
        k = self.k
        z = np.zeros(k)
        for i in range(k - 1, -1, -1):
            s = self.g[i] - self.rotated[i, i + 1:k] @ z[i + 1:]
            z[i] = s / self.rotated[i, i] if self.rotated[i, i] != 0.0 else 0.0
        return z


def arnoldi_step(op, state, counters=None, breakdown_tol=1e-14):
    """Expand the basis by one vector via MGS with one conditional re-pass.

    ``op`` evaluates the (preconditioned) operator.  Raises HappyBreakdown
    when the subdiagonal entry vanishes relative to the new column's norm.
    """
    k = state.k
    if k >= state.max_dim:
        raise ValueError("Arnoldi state is full; restart required")
    w = op(state.basis[k])
    h = state.hess[:, k]
    for i in range(k + 1):
        h[i] = dot(state.basis[i], w, counters)
        axpy(-h[i], state.basis[i], w, counters, out=w)
    h_new = norm2(w, counters)
    colnorm = math.sqrt(float(h[:k + 1] @ h[:k + 1]) + h_new * h_new)
    if h_new < REORTH_FACTOR * colnorm and h_new > 0.0:
        for i in range(k + 1):
            c = dot(state.basis[i], w, counters)
            axpy(-c, state.basis[i], w, counters, out=w)
            h[i] += c
        h_new = norm2(w, counters)
    state.hess[k + 1, k] = h_new
    state.k = k + 1
    if h_new <= breakdown_tol * max(colnorm, 1.0):
        raise HappyBreakdown
    scale(1.0 / h_new, w, counters, out=state.basis[k + 1])
    return h_new


def givens_lsq_update(state):
    """Rotate the newest Hessenberg column; returns the LSQ residual norm.

    The returned value equals ``min_z ||beta e_1 - H~ z||`` for the current
    column count, tracked incrementally through plane rotations.
    """
    k = state.k - 1  # column just produced by arnoldi_step
    r = state.rotated[:, k]
    r[:k + 2] = state.hess[:k + 2, k]
    for i in range(k):
        t = state.cos[i] * r[i] + state.sin[i] * r[i + 1]
        r[i + 1] = -state.sin[i] * r[i] + state.cos[i] * r[i + 1]
        r[i] = t
    denom = math.hypot(r[k], r[k + 1])
    if denom == 0.0:
        c, s = 1.0, 0.0
    else:
        c, s = r[k] / denom, r[k + 1] / denom
    state.cos[k], state.sin[k] = c, s
    r[k], r[k + 1] = denom, 0.0
    state.g[k + 1] = -s * state.g[k]
    state.g[k] = c * state.g[k]
    return abs(state.g[k + 1])
