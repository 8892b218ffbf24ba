"""ILU(0): incomplete LU factorization restricted to the pattern of A."""

import time

import numpy as np

from ..backend import kernels
from ..csr import CsrMatrix
from ..errors import ZeroDiagonal
from .basic import Preconditioner

PIVOT_TOL = 1e-14


class IluFactors:
    """Unit-lower L (strict lower pattern of A, implicit diagonal) and upper U.

    U keeps each row's diagonal entry first so the backward solve can read
    the pivot directly.
    """

    def __init__(self, L, U):
        self.L = L
        self.U = U
        self.shift_count = 0


def ilu0_factor(A, shift_pivots=False):
    """IKJ-ordered ILU(0) on the sparsity pattern of A.

    For matrices whose exact LU produces no fill (e.g. tridiagonal) the
    factors equal the dense LU.  A pivot with |value| < 1e-14 * max|row|
    aborts with ZeroPivot unless ``shift_pivots`` replaces it by
    sign(pivot) * 1e-14 * max|row| (shift count recorded on the result).
    """
    diag_pos = A.diag_positions()
    missing = np.nonzero(diag_pos < 0)[0]
    if missing.size:
        raise ZeroDiagonal(int(missing[0]))
    work = A.values.copy()
    shifts = kernels().ilu0_factor(A.row_ptr, A.col_idx, work, diag_pos,
                                   shift_pivots, PIVOT_TOL)

    rows = np.repeat(np.arange(A.n_rows, dtype=np.int64), np.diff(A.row_ptr))
    lower = A.col_idx < rows
    upper = ~lower
    l_ptr = np.zeros(A.n_rows + 1, dtype=np.int64)
    np.add.at(l_ptr, rows[lower] + 1, 1)
    np.cumsum(l_ptr, out=l_ptr)
    u_ptr = np.zeros(A.n_rows + 1, dtype=np.int64)
    np.add.at(u_ptr, rows[upper] + 1, 1)
    np.cumsum(u_ptr, out=u_ptr)
    L = CsrMatrix(A.n_rows, A.n_cols, l_ptr, A.col_idx[lower], work[lower],
                  _checked=True)
    U = CsrMatrix(A.n_rows, A.n_cols, u_ptr, A.col_idx[upper], work[upper],
                  _checked=True)
    factors = IluFactors(L, U)
    factors.shift_count = shifts
    return factors


def ilu_apply(factors, v, out=None):
    """w = U^{-1} (L^{-1} v): forward then backward substitution."""
    L, U = factors.L, factors.U
    if out is None:
        out = np.empty(L.n_rows)
    impl = kernels()
    impl.solve_unit_lower(L.row_ptr, L.col_idx, L.values, v, out)
    # backward solve is safe in place: row i reads rhs[i] before writing out[i]
    impl.solve_upper(U.row_ptr, U.col_idx, U.values, out, out)
    return out


class Ilu0Precond(Preconditioner):
    kind = "ilu0"

    def __init__(self, factors, setup_seconds):
        super().__init__(factors.L.n_rows, setup_seconds)
        self.factors = factors

    def apply(self, v):
        self._check(v)
        return ilu_apply(self.factors, v)


def ilu0_setup(A, shift_pivots=False):
    t0 = time.perf_counter()
    factors = ilu0_factor(A, shift_pivots=shift_pivots)
    return Ilu0Precond(factors, time.perf_counter() - t0)
