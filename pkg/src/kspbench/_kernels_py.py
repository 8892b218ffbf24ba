"""Pure-Python (numpy) implementations of the hot CSR kernels.

This module mirrors the interface of the compiled extension
``kspbench._ckernels`` and is selected as a fallback when the extension is
not built (see :mod:`kspbench.backend`).  All functions operate on the raw
CSR arrays (``row_ptr``/``col_idx`` int64, ``values`` float64) so that the
two backends stay drop-in interchangeable.
"""

import numpy as np

from .errors import ZeroPivot

NAME = "python"


def spmv(row_ptr, col_idx, values, x, out):
    """out <- A @ x for a CSR matrix given by its raw arrays."""
    n_rows = row_ptr.shape[0] - 1
    products = values * x[col_idx]
    rows = np.repeat(np.arange(n_rows), np.diff(row_ptr))
    out[:] = np.bincount(rows, weights=products, minlength=n_rows)
    return out


def sor_forward_solve(row_ptr, col_idx, values, diag, omega, rhs, out):
    """Solve (D/omega + L) w = rhs by forward substitution (L strict lower of A)."""
    n = row_ptr.shape[0] - 1
    for i in range(n):
        lo, hi = row_ptr[i], row_ptr[i + 1]
        cols = col_idx[lo:hi]
        below = cols < i
        s = values[lo:hi][below] @ out[cols[below]]
        out[i] = omega * (rhs[i] - s) / diag[i]
    return out


def sor_backward_solve(row_ptr, col_idx, values, diag, omega, rhs, out):
    """Solve (D/omega + U) w = rhs by backward substitution (U strict upper of A)."""
    n = row_ptr.shape[0] - 1
    for i in range(n - 1, -1, -1):
        lo, hi = row_ptr[i], row_ptr[i + 1]
        cols = col_idx[lo:hi]
        above = cols > i
        s = values[lo:hi][above] @ out[cols[above]]
        out[i] = omega * (rhs[i] - s) / diag[i]
    return out


def sor_relax_forward(row_ptr, col_idx, values, diag, omega, b, x):
    """One in-place forward SOR relaxation sweep on A x = b."""
    n = row_ptr.shape[0] - 1
    for i in range(n):
        lo, hi = row_ptr[i], row_ptr[i + 1]
        cols = col_idx[lo:hi]
        s = values[lo:hi] @ x[cols] - diag[i] * x[i]
        x[i] = (1.0 - omega) * x[i] + omega * (b[i] - s) / diag[i]
    return x


def sor_relax_backward(row_ptr, col_idx, values, diag, omega, b, x):
    """One in-place backward SOR relaxation sweep on A x = b."""
    n = row_ptr.shape[0] - 1
    for i in range(n - 1, -1, -1):
        lo, hi = row_ptr[i], row_ptr[i + 1]
        cols = col_idx[lo:hi]
        s = values[lo:hi] @ x[cols] - diag[i] * x[i]
        x[i] = (1.0 - omega) * x[i] + omega * (b[i] - s) / diag[i]
    return x


def solve_unit_lower(row_ptr, col_idx, values, rhs, out):
    """Solve L w = rhs where L is strictly lower CSR with implicit unit diagonal."""
    n = row_ptr.shape[0] - 1
    for i in range(n):
        lo, hi = row_ptr[i], row_ptr[i + 1]
        out[i] = rhs[i] - values[lo:hi] @ out[col_idx[lo:hi]]
    return out


def solve_upper(row_ptr, col_idx, values, rhs, out):
    """Solve U w = rhs where U is upper CSR with the diagonal entry leading each row."""
    n = row_ptr.shape[0] - 1
    for i in range(n - 1, -1, -1):
        lo, hi = row_ptr[i], row_ptr[i + 1]
        s = values[lo + 1:hi] @ out[col_idx[lo + 1:hi]]
        out[i] = (rhs[i] - s) / values[lo]
    return out


def ilu0_factor(row_ptr, col_idx, values, diag_pos, shift_pivots, pivot_tol):
    """In-place ILU(0) on the CSR value array, IKJ ordering, pattern of A.

    On return the strict lower entries hold the L multipliers (unit diagonal
    implicit) and the diagonal/upper entries hold U.  Returns the number of
    pivot shifts applied; raises ZeroPivot when shifting is disabled.
    """
    n = row_ptr.shape[0] - 1
    shifts = 0
    for i in range(n):
        lo, hi = row_ptr[i], row_ptr[i + 1]
        for p in range(lo, hi):
            k = col_idx[p]
            if k >= i:
                break
            lik = values[p] / values[diag_pos[k]]
            values[p] = lik
            # subtract lik * U(k, j) on the shared pattern, cols > k only
            q = p + 1
            for r in range(diag_pos[k] + 1, row_ptr[k + 1]):
                jcol = col_idx[r]
                while q < hi and col_idx[q] < jcol:
                    q += 1
                if q == hi:
                    break
                if col_idx[q] == jcol:
                    values[q] -= lik * values[r]
        piv = values[diag_pos[i]]
        maxrow = np.max(np.abs(values[lo:hi])) if hi > lo else 0.0
        if abs(piv) < pivot_tol * maxrow or piv == 0.0:
            if not shift_pivots:
                raise ZeroPivot(i)
            sign = 1.0 if piv >= 0.0 else -1.0
            values[diag_pos[i]] = sign * max(pivot_tol * maxrow, pivot_tol)
            shifts += 1
    return shifts


def spgemm(n_rows, n_cols_b, a_ptr, a_idx, a_val, b_ptr, b_idx, b_val):
    """C = A @ B for CSR operands; returns canonical (row_ptr, col_idx, values)."""
    c_ptr = np.zeros(n_rows + 1, dtype=np.int64)
    rows_idx = []
    rows_val = []
    for i in range(n_rows):
        acc = {}
        for p in range(a_ptr[i], a_ptr[i + 1]):
            k = a_idx[p]
            av = a_val[p]
            for q in range(b_ptr[k], b_ptr[k + 1]):
                j = b_idx[q]
                acc[j] = acc.get(j, 0.0) + av * b_val[q]
        cols = sorted(acc)
        c_ptr[i + 1] = c_ptr[i] + len(cols)
        rows_idx.append(np.array(cols, dtype=np.int64))
        rows_val.append(np.array([acc[j] for j in cols]))
    c_idx = np.concatenate(rows_idx) if rows_idx else np.zeros(0, dtype=np.int64)
    c_val = np.concatenate(rows_val) if rows_val else np.zeros(0)
    return c_ptr, c_idx, c_val
