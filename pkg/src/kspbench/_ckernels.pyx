# Compiled CSR kernels. Interface mirrors kspbench._kernels_py exactly;
# the backend module picks whichever is importable.

import numpy as np

cimport numpy as cnp

from libc.math cimport fabs

from .errors import ZeroPivot

cnp.import_array()

NAME = "compiled"

ctypedef cnp.int64_t idx_t
ctypedef cnp.float64_t val_t


def spmv(const idx_t[:] row_ptr, const idx_t[:] col_idx, const val_t[:] values,
         const val_t[:] x, val_t[:] out):
    cdef Py_ssize_t n = row_ptr.shape[0] - 1
    cdef Py_ssize_t i, p
    cdef val_t s
    for i in range(n):
        s = 0.0
        for p in range(row_ptr[i], row_ptr[i + 1]):
            s += values[p] * x[col_idx[p]]
        out[i] = s
    return np.asarray(out)


def sor_forward_solve(const idx_t[:] row_ptr, const idx_t[:] col_idx,
                      const val_t[:] values, const val_t[:] diag,
                      double omega, const val_t[:] rhs, val_t[:] out):
    cdef Py_ssize_t n = row_ptr.shape[0] - 1
    cdef Py_ssize_t i, p
    cdef idx_t j
    cdef val_t s
    for i in range(n):
        s = 0.0
        for p in range(row_ptr[i], row_ptr[i + 1]):
            j = col_idx[p]
            if j >= i:
                break
            s += values[p] * out[j]
        out[i] = omega * (rhs[i] - s) / diag[i]
    return np.asarray(out)


def sor_backward_solve(const idx_t[:] row_ptr, const idx_t[:] col_idx,
                       const val_t[:] values, const val_t[:] diag,
                       double omega, const val_t[:] rhs, val_t[:] out):
    cdef Py_ssize_t n = row_ptr.shape[0] - 1
    cdef Py_ssize_t i, p
    cdef idx_t j
    cdef val_t s
    for i in range(n - 1, -1, -1):
        s = 0.0
        for p in range(row_ptr[i + 1] - 1, row_ptr[i] - 1, -1):
            j = col_idx[p]
            if j <= i:
                break
            s += values[p] * out[j]
        out[i] = omega * (rhs[i] - s) / diag[i]
    return np.asarray(out)


def sor_relax_forward(const idx_t[:] row_ptr, const idx_t[:] col_idx,
                      const val_t[:] values, const val_t[:] diag,
                      double omega, const val_t[:] b, val_t[:] x):
    cdef Py_ssize_t n = row_ptr.shape[0] - 1
    cdef Py_ssize_t i, p
    cdef idx_t j
    cdef val_t s
    for i in range(n):
        s = 0.0
        for p in range(row_ptr[i], row_ptr[i + 1]):
            j = col_idx[p]
            if j != i:
                s += values[p] * x[j]
        x[i] = (1.0 - omega) * x[i] + omega * (b[i] - s) / diag[i]
    return np.asarray(x)


def sor_relax_backward(const idx_t[:] row_ptr, const idx_t[:] col_idx,
                       const val_t[:] values, const val_t[:] diag,
                       double omega, const val_t[:] b, val_t[:] x):
    cdef Py_ssize_t n = row_ptr.shape[0] - 1
    cdef Py_ssize_t i, p
    cdef idx_t j
    cdef val_t s
    for i in range(n - 1, -1, -1):
        s = 0.0
        for p in range(row_ptr[i], row_ptr[i + 1]):
            j = col_idx[p]
            if j != i:
                s += values[p] * x[j]
        x[i] = (1.0 - omega) * x[i] + omega * (b[i] - s) / diag[i]
    return np.asarray(x)


def solve_unit_lower(const idx_t[:] row_ptr, const idx_t[:] col_idx,
                     const val_t[:] values, const val_t[:] rhs, val_t[:] out):
    cdef Py_ssize_t n = row_ptr.shape[0] - 1
    cdef Py_ssize_t i, p
    cdef val_t s
    for i in range(n):
        s = 0.0
        for p in range(row_ptr[i], row_ptr[i + 1]):
            s += values[p] * out[col_idx[p]]
        out[i] = rhs[i] - s
    return np.asarray(out)


def solve_upper(const idx_t[:] row_ptr, const idx_t[:] col_idx,
                const val_t[:] values, const val_t[:] rhs, val_t[:] out):
    cdef Py_ssize_t n = row_ptr.shape[0] - 1
    cdef Py_ssize_t i, p
    cdef val_t s
    for i in range(n - 1, -1, -1):
        s = 0.0
        for p in range(row_ptr[i] + 1, row_ptr[i + 1]):
            s += values[p] * out[col_idx[p]]
        out[i] = (rhs[i] - s) / values[row_ptr[i]]
    return np.asarray(out)


def ilu0_factor(const idx_t[:] row_ptr, const idx_t[:] col_idx, val_t[:] values,
                const idx_t[:] diag_pos, bint shift_pivots, double pivot_tol):
    cdef Py_ssize_t n = row_ptr.shape[0] - 1
    cdef Py_ssize_t i, p, q, r, lo, hi
    cdef idx_t k, jcol
    cdef val_t lik, piv, maxrow, sign
    cdef int shifts = 0
    for i in range(n):
        lo = row_ptr[i]
        hi = row_ptr[i + 1]
        for p in range(lo, hi):
            k = col_idx[p]
            if k >= i:
                break
            lik = values[p] / values[diag_pos[k]]
            values[p] = lik
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
        maxrow = 0.0
        for p in range(lo, hi):
            if fabs(values[p]) > maxrow:
                maxrow = fabs(values[p])
        if fabs(piv) < pivot_tol * maxrow or piv == 0.0:
            if not shift_pivots:
                raise ZeroPivot(i)
            sign = 1.0 if piv >= 0.0 else -1.0
            values[diag_pos[i]] = sign * max(pivot_tol * maxrow, pivot_tol)
            shifts += 1
    return shifts


def spgemm(Py_ssize_t n_rows, Py_ssize_t n_cols_b,
           const idx_t[:] a_ptr, const idx_t[:] a_idx, const val_t[:] a_val,
           const idx_t[:] b_ptr, const idx_t[:] b_idx, const val_t[:] b_val):
    """C = A @ B via Gustavson's algorithm with a dense accumulator."""
    cdef cnp.ndarray[idx_t, ndim=1] c_ptr = np.zeros(n_rows + 1, dtype=np.int64)
    cdef val_t[:] work = np.zeros(n_cols_b)
    cdef idx_t[:] marker = np.full(n_cols_b, -1, dtype=np.int64)
    cdef idx_t[:] pattern = np.empty(n_cols_b, dtype=np.int64)
    cdef Py_ssize_t i, p, q, m, s, t
    cdef idx_t k, j, tmp
    cdef val_t av

    # first pass: count nnz per row of C
    for i in range(n_rows):
        m = 0
        for p in range(a_ptr[i], a_ptr[i + 1]):
            k = a_idx[p]
            for q in range(b_ptr[k], b_ptr[k + 1]):
                j = b_idx[q]
                if marker[j] != i:
                    marker[j] = i
                    m += 1
        c_ptr[i + 1] = c_ptr[i] + m

    cdef cnp.ndarray[idx_t, ndim=1] c_idx = np.empty(c_ptr[n_rows], dtype=np.int64)
    cdef cnp.ndarray[val_t, ndim=1] c_val = np.empty(c_ptr[n_rows])
    cdef idx_t[:] ci = c_idx
    cdef val_t[:] cv = c_val
    marker[:] = -1

    for i in range(n_rows):
        m = 0
        for p in range(a_ptr[i], a_ptr[i + 1]):
            k = a_idx[p]
            av = a_val[p]
            for q in range(b_ptr[k], b_ptr[k + 1]):
                j = b_idx[q]
                if marker[j] != i:
                    marker[j] = i
                    work[j] = av * b_val[q]
                    pattern[m] = j
                    m += 1
                else:
                    work[j] += av * b_val[q]
        # insertion sort: rows are short, keeps columns strictly increasing
        for s in range(1, m):
            tmp = pattern[s]
            t = s - 1
            while t >= 0 and pattern[t] > tmp:
                pattern[t + 1] = pattern[t]
                t -= 1
            pattern[t + 1] = tmp
        for s in range(m):
            j = pattern[s]
            ci[c_ptr[i] + s] = j
            cv[c_ptr[i] + s] = work[j]
    return c_ptr, c_idx, c_val
