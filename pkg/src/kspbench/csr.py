"""Compressed sparse row storage, the single matrix format used everywhere.

A ``CsrMatrix`` is immutable after construction: the index/value arrays are
marked read-only so the matrix can be shared freely across threads and
between solver, preconditioner and benchmark layers.
"""

import numpy as np

from .backend import kernels
from .errors import DimensionMismatch, IndexOutOfRange, NonFiniteValue


class CsrMatrix:
    """Sparse matrix in CSR form with sorted, duplicate-free columns per row.

    Parameters
    ----------
    n_rows, n_cols : int
        Matrix dimensions, both positive.
    row_ptr : (n_rows+1,) int64 array
        Monotone row offsets into ``col_idx``/``values``; ``row_ptr[0] == 0``.
    col_idx : (nnz,) int64 array
        Column indices, strictly increasing within each row.
    values : (nnz,) float64 array
        Entry values; explicit zeros are permitted (fixed-pattern work such
        as ILU(0) relies on them being retained).
    """

    __slots__ = ("n_rows", "n_cols", "row_ptr", "col_idx", "values")

    def __init__(self, n_rows, n_cols, row_ptr, col_idx, values, _checked=False):
        if n_rows <= 0 or n_cols <= 0:
            raise DimensionMismatch(f"matrix dims must be positive, got {n_rows}x{n_cols}")
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.row_ptr = np.ascontiguousarray(row_ptr, dtype=np.int64)
        self.col_idx = np.ascontiguousarray(col_idx, dtype=np.int64)
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        if not _checked:
            self._validate()
        for arr in (self.row_ptr, self.col_idx, self.values):
            arr.flags.writeable = False

    def _validate(self):
        rp, ci, v = self.row_ptr, self.col_idx, self.values
        if rp.shape != (self.n_rows + 1,):
            raise DimensionMismatch("row_ptr length must be n_rows + 1")
        if rp[0] != 0 or rp[-1] != ci.shape[0] or ci.shape != v.shape:
            raise DimensionMismatch("row_ptr/col_idx/values are inconsistent")
        if np.any(np.diff(rp) < 0):
            raise DimensionMismatch("row_ptr must be non-decreasing")
        if ci.size:
            if ci.min() < 0 or ci.max() >= self.n_cols:
                raise IndexOutOfRange("column index out of range")
            # strictly increasing inside each row: decreases may only occur
            # at row boundaries
            dec = np.nonzero(np.diff(ci) <= 0)[0] + 1
            if not np.all(np.isin(dec, rp[1:-1])):
                raise DimensionMismatch("columns must be strictly increasing within a row")
        if not np.all(np.isfinite(v)):
            raise NonFiniteValue("matrix values must be finite")

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_triplets(cls, triplets, n_rows, n_cols):
        """Build from (row, col, value) triplets; duplicates are summed.

        Accepts any iterable of triplets or a tuple of three arrays.  The
        result is independent of triplet ordering, and explicit zeros
        produced by duplicate cancellation are retained.
        """
        if isinstance(triplets, tuple) and len(triplets) == 3:
            rows, cols, vals = triplets
            rows = np.asarray(rows, dtype=np.int64)
            cols = np.asarray(cols, dtype=np.int64)
            vals = np.asarray(vals, dtype=np.float64)
        else:
            data = list(triplets)
            rows = np.array([t[0] for t in data], dtype=np.int64)
            cols = np.array([t[1] for t in data], dtype=np.int64)
            vals = np.array([t[2] for t in data], dtype=np.float64)
        if rows.size:
            if rows.min() < 0 or rows.max() >= n_rows:
                raise IndexOutOfRange("triplet row index out of range")
            if cols.min() < 0 or cols.max() >= n_cols:
                raise IndexOutOfRange("triplet column index out of range")
        if not np.all(np.isfinite(vals)):
            raise NonFiniteValue("triplet values must be finite")

        # canonical order, then segment-sum duplicates; sorting duplicates by
        # value as well fixes the summation order, so the result is bitwise
        # invariant under any permutation of the input triplets
        order = np.lexsort((vals, cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if rows.size:
            new_entry = np.empty(rows.size, dtype=bool)
            new_entry[0] = True
            new_entry[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            starts = np.nonzero(new_entry)[0]
            vals = np.add.reduceat(vals, starts)
            rows, cols = rows[starts], cols[starts]
        row_ptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.add.at(row_ptr, rows + 1, 1)
        np.cumsum(row_ptr, out=row_ptr)
        return cls(n_rows, n_cols, row_ptr, cols, vals, _checked=True)

    @classmethod
    def identity(cls, n):
        idx = np.arange(n, dtype=np.int64)
        return cls(n, n, np.arange(n + 1, dtype=np.int64), idx, np.ones(n), _checked=True)

    @classmethod
    def from_dense(cls, dense):
        dense = np.asarray(dense, dtype=np.float64)
        rows, cols = np.nonzero(dense)
        return cls.from_triplets((rows, cols, dense[rows, cols]), *dense.shape)

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    @property
    def nnz(self):
        return int(self.row_ptr[-1])

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def avg_row_nnz(self):
        return self.nnz / self.n_rows

    def to_dense(self):
        dense = np.zeros((self.n_rows, self.n_cols))
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.row_ptr))
        dense[rows, self.col_idx] = self.values
        return dense

    def diagonal(self):
        """Main-diagonal values; absent entries are zero."""
        d = np.zeros(min(self.n_rows, self.n_cols))
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.row_ptr))
        on_diag = rows == self.col_idx
        d[rows[on_diag]] = self.values[on_diag]
        return d

    def diag_positions(self):
        """Index into ``values`` of each row's diagonal entry, or -1 if absent."""
        pos = np.full(self.n_rows, -1, dtype=np.int64)
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.row_ptr))
        on_diag = np.nonzero(rows == self.col_idx)[0]
        pos[rows[on_diag]] = on_diag
        return pos

    def row(self, i):
        lo, hi = self.row_ptr[i], self.row_ptr[i + 1]
        return self.col_idx[lo:hi], self.values[lo:hi]

    def __repr__(self):
        return f"CsrMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"

    # ------------------------------------------------------------------
    # algebra (setup-path helpers; the counted solve-path SpMV lives in
    # kspbench.kernels)
    # ------------------------------------------------------------------

    def matvec(self, x, out=None):
        """Uncounted A @ x through the active kernel backend."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_cols,):
            raise DimensionMismatch(f"matvec: expected length {self.n_cols}, got {x.shape}")
        if out is None:
            out = np.empty(self.n_rows)
        kernels().spmv(self.row_ptr, self.col_idx, self.values, x, out)
        return out

    def transpose(self):
        order = np.argsort(self.col_idx, kind="stable")
        rows = np.repeat(np.arange(self.n_rows, dtype=np.int64), np.diff(self.row_ptr))
        t_ptr = np.zeros(self.n_cols + 1, dtype=np.int64)
        np.add.at(t_ptr, self.col_idx + 1, 1)
        np.cumsum(t_ptr, out=t_ptr)
        return CsrMatrix(self.n_cols, self.n_rows, t_ptr, rows[order],
                         self.values[order], _checked=True)

    def matmul(self, other):
        if self.n_cols != other.n_rows:
            raise DimensionMismatch("matmul: inner dimensions disagree")
        ptr, idx, val = kernels().spgemm(
            self.n_rows, other.n_cols,
            self.row_ptr, self.col_idx, self.values,
            other.row_ptr, other.col_idx, other.values)
        return CsrMatrix(self.n_rows, other.n_cols, ptr, idx, val, _checked=True)

    def scaled_abs_symmetrized(self):
        """(|A| + |A^T|) / 2, used for strength-of-connection graphs."""
        rows = np.repeat(np.arange(self.n_rows, dtype=np.int64), np.diff(self.row_ptr))
        absv = 0.5 * np.abs(self.values)
        return CsrMatrix.from_triplets(
            (np.concatenate([rows, self.col_idx]),
             np.concatenate([self.col_idx, rows]),
             np.concatenate([absv, absv])),
            self.n_rows, self.n_cols)

    def infinity_norm(self):
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.row_ptr))
        return float(np.bincount(rows, weights=np.abs(self.values),
                                 minlength=self.n_rows).max()) if self.nnz else 0.0
