"""Pointwise right preconditioners: identity, Jacobi, Gauss-Seidel/SOR.

Every preconditioner is a fixed linear operator after setup; ``apply`` never
mutates internal state and is safe to call concurrently on distinct vectors.
"""

import time

import numpy as np

from ..backend import kernels
from ..errors import DimensionMismatch, ZeroDiagonal


class Preconditioner:
    """Base class: built state plus an ``apply(v) ~= M^{-1} v`` operation."""

    kind = "base"

    def __init__(self, n, setup_seconds=0.0):
        self.n = n
        self.setup_seconds = setup_seconds

    def _check(self, v):
        if v.shape != (self.n,):
            raise DimensionMismatch(f"preconditioner built for n={self.n}, got {v.shape}")

    def apply(self, v):
        raise NotImplementedError


class IdentityPrecond(Preconditioner):
    kind = "identity"

    def apply(self, v):
        self._check(v)
        return v


class JacobiPrecond(Preconditioner):
    kind = "jacobi"

    def __init__(self, inv_diag, setup_seconds):
        super().__init__(inv_diag.shape[0], setup_seconds)
        self.inv_diag = inv_diag

    def apply(self, v):
        self._check(v)
        return self.inv_diag * v


class SorPrecond(Preconditioner):
    """One forward SOR sweep: apply(v) solves (D/omega + L) w = v."""

    def __init__(self, A, omega, setup_seconds):
        super().__init__(A.n_rows, setup_seconds)
        self.kind = "gs" if omega == 1.0 else "sor"
        self.A = A
        self.omega = omega
        self.diag = A.diagonal()

    def apply(self, v):
        self._check(v)
        out = np.empty(self.n)
        kernels().sor_forward_solve(self.A.row_ptr, self.A.col_idx, self.A.values,
                                    self.diag, self.omega, v, out)
        return out


def identity_setup(A):
    return IdentityPrecond(A.n_rows)


def jacobi_setup(A):
    """Diagonal preconditioner; every diagonal entry of A must be nonzero."""
    t0 = time.perf_counter()
    diag = A.diagonal()
    zero = np.nonzero(diag == 0.0)[0]
    if zero.size:
        raise ZeroDiagonal(int(zero[0]))
    return JacobiPrecond(1.0 / diag, time.perf_counter() - t0)


def sor_setup(A, omega):
    if not 0.0 < omega < 2.0:
        raise ValueError(f"SOR requires 0 < omega < 2, got {omega}")
    t0 = time.perf_counter()
    diag = A.diagonal()
    zero = np.nonzero(diag == 0.0)[0]
    if zero.size:
        raise ZeroDiagonal(int(zero[0]))
    return SorPrecond(A, omega, time.perf_counter() - t0)


def gs_setup(A):
    """Gauss-Seidel, i.e. SOR with omega = 1."""
    return sor_setup(A, 1.0)


def gs_sor_apply(A, omega, v):
    """One forward sweep solving (D/omega + L) w = v, without building state."""
    return sor_setup(A, omega).apply(np.asarray(v, dtype=np.float64))
