"""Matrix Market exchange format (coordinate, real/integer, general/symmetric).

Indices are 1-based on disk and 0-based in memory.  Values are written with
17 significant digits, which round-trips IEEE doubles exactly.
"""

import numpy as np

from .csr import CsrMatrix
from .errors import ParseError, UnsupportedFormat

_BANNER = "%%MatrixMarket"


def read_matrix_market(path):
    """Read a coordinate-format Matrix Market file into a CsrMatrix.

    Symmetric storage is expanded to general; complex fields and array
    format raise UnsupportedFormat.
    """
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        if not header.startswith(_BANNER):
            raise ParseError(f"{path}: missing MatrixMarket banner")
        parts = header.strip().split()
        if len(parts) != 5:
            raise ParseError(f"{path}: malformed banner {header.strip()!r}")
        _, obj, fmt, field, symmetry = (p.lower() for p in parts)
        if obj != "matrix":
            raise UnsupportedFormat(f"{path}: object {obj!r} not supported")
        if fmt != "coordinate":
            raise UnsupportedFormat(f"{path}: format {fmt!r} not supported")
        if field not in ("real", "integer"):
            raise UnsupportedFormat(f"{path}: field {field!r} not supported")
        if symmetry not in ("general", "symmetric"):
            raise UnsupportedFormat(f"{path}: symmetry {symmetry!r} not supported")

        size_line = None
        for line in fh:
            stripped = line.strip()
            if stripped and not stripped.startswith("%"):
                size_line = stripped
                break
        if size_line is None:
            raise ParseError(f"{path}: missing size line")
        try:
            n_rows, n_cols, nnz = (int(t) for t in size_line.split())
        except ValueError as exc:
            raise ParseError(f"{path}: bad size line {size_line!r}") from exc

        rows = np.empty(nnz, dtype=np.int64)
        cols = np.empty(nnz, dtype=np.int64)
        vals = np.empty(nnz)
        k = 0
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue
            tokens = stripped.split()
            if len(tokens) != 3:
                raise ParseError(f"{path}: bad entry line {stripped!r}")
            if k >= nnz:
                raise ParseError(f"{path}: more entries than declared ({nnz})")
            try:
                rows[k] = int(tokens[0]) - 1
                cols[k] = int(tokens[1]) - 1
                vals[k] = float(tokens[2])
            except ValueError as exc:
                raise ParseError(f"{path}: bad entry line {stripped!r}") from exc
            k += 1
        if k != nnz:
            raise ParseError(f"{path}: {k} entries read, {nnz} declared")

    if symmetry == "symmetric":
        off = rows != cols
        rows, cols, vals = (np.concatenate([rows, cols[off]]),
                            np.concatenate([cols, rows[off]]),
                            np.concatenate([vals, vals[off]]))
    return CsrMatrix.from_triplets((rows, cols, vals), n_rows, n_cols)


def write_matrix_market(A, path, comment=None):
    """Write a CsrMatrix in coordinate/real/general form."""
    rows = np.repeat(np.arange(A.n_rows), np.diff(A.row_ptr))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        if comment:
            for line in comment.splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{A.n_rows} {A.n_cols} {A.nnz}\n")
        for i, j, v in zip(rows, A.col_idx, A.values):
            fh.write(f"{i + 1} {j + 1} {v:.17g}\n")


def write_vector_market(v, path, comment=None):
    """Write a dense vector as an n-by-1 coordinate file (zeros included)."""
    v = np.asarray(v, dtype=np.float64)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        if comment:
            for line in comment.splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{v.shape[0]} 1 {v.shape[0]}\n")
        for i, x in enumerate(v):
            fh.write(f"{i + 1} 1 {x:.17g}\n")


def read_vector_market(path):
    """Read an n-by-1 (or 1-by-n) coordinate file as a dense vector."""
    A = read_matrix_market(path)
    if A.n_cols != 1 and A.n_rows != 1:
        raise ParseError(f"{path}: expected a vector, got {A.n_rows}x{A.n_cols}")
    return A.to_dense().reshape(-1)
