"""PDE test-matrix generators.

Structured-grid analogs of the benchmark's convection-diffusion and
Helmholtz systems: 5/7-point finite differences on the unit square/cube,
P1 finite elements on a right-triangulated unit square (all Dirichlet), and
a Neumann finite-difference Helmholtz operator on a geometrically stretched
grid whose d=0 limit is exactly singular with a constant null vector.

For every family ``n_per_dim`` counts unknowns-bearing grid lines per
dimension: interior lines for Dirichlet problems (mesh width
``h = 1/(n_per_dim+1)``), all lines for the Neumann problem.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .csr import CsrMatrix
from .errors import InvalidSpec

FAMILIES = ("fd2d", "fd3d", "fem2d", "helmholtz2d")


@dataclass
class ProblemSpec:
    family: str
    n_per_dim: int
    c: tuple = (1.0, 1.0)
    d: float = 0.0
    scheme: str | None = None  # None: upwind iff cell Peclet > 1
    stretch: float = 1.0
    bc: str | None = None  # defaulted per family

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown family {self.family!r}")
        if self.n_per_dim < 2 and self.family == "helmholtz2d":
            raise InvalidSpec("helmholtz2d needs n_per_dim >= 2")
        if self.n_per_dim < 1:
            raise InvalidSpec("n_per_dim must be positive")
        if self.stretch < 1.0:
            raise InvalidSpec("stretch must be >= 1")
        dims = 3 if self.family == "fd3d" else 2
        c = tuple(float(v) for v in np.atleast_1d(self.c)[:dims])
        if len(c) < dims:
            c = c + (0.0,) * (dims - len(c))
        self.c = c
        default_bc = "neumann" if self.family == "helmholtz2d" else "dirichlet"
        if self.bc is None:
            self.bc = default_bc
        elif self.bc != default_bc:
            raise InvalidSpec(f"{self.family} supports only {default_bc} BCs")
        if self.scheme is not None and self.scheme not in ("centered", "upwind"):
            raise InvalidSpec(f"unknown scheme {self.scheme!r}")

    def resolved_scheme(self, h):
        if self.scheme is not None:
            return self.scheme
        peclet = max(abs(v) for v in self.c) * h / 2.0
        return "upwind" if peclet > 1.0 else "centered"

    def label(self):
        return f"{self.family}-n{self.n_per_dim}"


@dataclass
class GeneratedProblem:
    A: CsrMatrix
    b: np.ndarray
    x_exact: np.ndarray | None
    meta: dict = field(default_factory=dict)


def generate(spec):
    """Dispatch a ProblemSpec to its generator."""
    if spec.family == "fd2d":
        return fd_conv_diff_2d(spec)
    if spec.family == "fd3d":
        return fd_conv_diff_3d(spec)
    if spec.family == "fem2d":
        return fem_p1_conv_diff_2d(spec)
    return helmholtz_fd_2d_nonuniform(spec)


def manufactured_rhs(A, pattern, coords=None):
    """Sample x_exact from a named pattern and form b = A x_exact discretely.

    ``coords`` is the (n, dim) node-coordinate array generators store in
    meta; only the "sinsin" pattern needs it.
    """
    if pattern == "ones":
        x = np.ones(A.n_cols)
    elif pattern == "sinsin":
        if coords is None:
            raise InvalidSpec("sinsin pattern needs node coordinates")
        x = np.prod(np.sin(np.pi * coords), axis=1)
    else:
        raise InvalidSpec(f"unknown rhs pattern {pattern!r}")
    return A.matvec(x), x


# ----------------------------------------------------------------------
# finite differences, Dirichlet box
# ----------------------------------------------------------------------

def _fd_axis_terms(c_axis, h, scheme):
    """(west, diag, east) convection contributions for one axis."""
    if scheme == "centered":
        return -c_axis / (2.0 * h), 0.0, c_axis / (2.0 * h)
    if c_axis >= 0.0:
        return -c_axis / h, c_axis / h, 0.0
    return 0.0, -c_axis / h, c_axis / h


def _fd_assemble(spec, dims):
    n = spec.n_per_dim
    h = 1.0 / (n + 1)
    scheme = spec.resolved_scheme(h)
    size = n ** dims
    inv_h2 = 1.0 / (h * h)
    strides = [n ** a for a in range(dims)]

    node = np.arange(size)
    pos = [(node // s) % n for s in strides]  # pos[a]: grid index along axis a

    rows, cols, vals = [], [], []
    diag = np.full(size, 2.0 * dims * inv_h2 + spec.d)
    for axis in range(dims):
        west, dadd, east = _fd_axis_terms(spec.c[axis], h, scheme)
        diag += dadd
        has_west = pos[axis] > 0
        rows.append(node[has_west])
        cols.append(node[has_west] - strides[axis])
        vals.append(np.full(int(has_west.sum()), -inv_h2 + west))
        has_east = pos[axis] < n - 1
        rows.append(node[has_east])
        cols.append(node[has_east] + strides[axis])
        vals.append(np.full(int(has_east.sum()), -inv_h2 + east))
    rows.append(node)
    cols.append(node)
    vals.append(diag)
    A = CsrMatrix.from_triplets(
        (np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)),
        size, size)

    axes = h * (1.0 + np.arange(n))
    coords = np.stack([axes[p] for p in pos], axis=1)
    b, x_exact = manufactured_rhs(A, "ones")
    meta = {"family": spec.family, "n_per_dim": n, "h_min": h, "h_max": h,
            "nnz": A.nnz, "symmetric": all(v == 0.0 for v in spec.c),
            "scheme": scheme, "coords": coords}
    return GeneratedProblem(A, b, x_exact, meta)


def fd_conv_diff_2d(spec):
    """5-point Laplacian plus convection/reaction on the unit square."""
    return _fd_assemble(spec, 2)


def fd_conv_diff_3d(spec):
    """7-point Laplacian plus convection/reaction on the unit cube."""
    return _fd_assemble(spec, 3)


# ----------------------------------------------------------------------
# P1 finite elements, right-triangulated unit square, Dirichlet
# ----------------------------------------------------------------------

def _p1_element(xy, c, d):
    """Stiffness + convection + mass for one P1 triangle (exact quadrature)."""
    x, y = xy[:, 0], xy[:, 1]
    bvec = np.array([y[1] - y[2], y[2] - y[0], y[0] - y[1]])
    cvec = np.array([x[2] - x[1], x[0] - x[2], x[1] - x[0]])
    area = 0.5 * ((x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]))
    stiff = (np.outer(bvec, bvec) + np.outer(cvec, cvec)) / (4.0 * area)
    conv_row = (c[0] * bvec + c[1] * cvec) / 6.0  # (c . grad phi_j) * area/3
    conv = np.tile(conv_row, (3, 1))
    mass = d * area / 12.0 * (np.ones((3, 3)) + np.eye(3))
    return stiff + conv + mass


def fem_p1_conv_diff_2d(spec):
    """Galerkin P1 assembly; symmetric iff the convection coefficient is zero."""
    if spec.family != "fem2d":
        raise InvalidSpec("spec family must be fem2d")
    n = spec.n_per_dim            # interior grid lines per dimension
    m = n + 2                     # node lines including the boundary
    h = 1.0 / (n + 1)

    node = np.arange(m * m)
    gx, gy = node % m, node // m

    cell = np.arange((m - 1) * (m - 1))
    ci, cj = cell % (m - 1), cell // (m - 1)
    v00 = cj * m + ci
    v10 = v00 + 1
    v01 = v00 + m
    v11 = v01 + 1
    # split along the (i,j)-(i+1,j+1) diagonal
    tris = [np.stack([v00, v10, v11], axis=1), np.stack([v00, v11, v01], axis=1)]
    unit = [np.array([[0.0, 0.0], [h, 0.0], [h, h]]),
            np.array([[0.0, 0.0], [h, h], [0.0, h]])]

    rows, cols, vals = [], [], []
    for tri_nodes, ref in zip(tris, unit):
        elem = _p1_element(ref, spec.c, spec.d)
        for a in range(3):
            for bidx in range(3):
                rows.append(tri_nodes[:, a])
                cols.append(tri_nodes[:, bidx])
                vals.append(np.full(tri_nodes.shape[0], elem[a, bidx]))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)

    interior = (gx >= 1) & (gx <= n) & (gy >= 1) & (gy <= n)
    remap = np.cumsum(interior) - 1
    keep = interior[rows] & interior[cols]
    A = CsrMatrix.from_triplets(
        (remap[rows[keep]], remap[cols[keep]], vals[keep]), n * n, n * n)

    coords = np.stack([gx[interior] * h, gy[interior] * h], axis=1)
    b, x_exact = manufactured_rhs(A, "ones")
    meta = {"family": "fem2d", "n_per_dim": n, "node_lines": m, "h_min": h,
            "h_max": h, "nnz": A.nnz,
            "symmetric": all(v == 0.0 for v in spec.c), "coords": coords}
    return GeneratedProblem(A, b, x_exact, meta)


# ----------------------------------------------------------------------
# Neumann Helmholtz on a stretched grid
# ----------------------------------------------------------------------

def _stretched_axis(n, stretch):
    """Coordinates in [0,1] with gaps growing geometrically from both ends."""
    k = np.arange(n - 1)
    gaps = stretch ** np.minimum(k, n - 2 - k).astype(np.float64)
    x = np.concatenate([[0.0], np.cumsum(gaps)])
    return x / x[-1]


def _axis_stencil_1d(x):
    """(west, east) second-difference coefficients with mirrored-ghost ends."""
    n = x.shape[0]
    west = np.zeros(n)
    east = np.zeros(n)
    hm = x[1:-1] - x[:-2]
    hp = x[2:] - x[1:-1]
    west[1:-1] = -2.0 / (hm * (hm + hp))
    east[1:-1] = -2.0 / (hp * (hm + hp))
    east[0] = -2.0 / (x[1] - x[0]) ** 2
    west[-1] = -2.0 / (x[-1] - x[-2]) ** 2
    return west, east


def _exact_zero_diagonal(row_ptr, col_idx, values, n):
    """Pick each diagonal so the row's left-to-right value fold is exactly 0.

    The SpMV kernels accumulate a row in ascending-column order, so a left
    fold over the stored values is the quantity A @ ones evaluates; a short
    ulp search around the negated off-diagonal sum pins it to exactly 0.0.
    """
    for i in range(n):
        lo, hi = int(row_ptr[i]), int(row_ptr[i + 1])
        cols = col_idx[lo:hi]
        dpos = lo + int(np.searchsorted(cols, i))
        others = -(np.sum(values[lo:dpos]) + np.sum(values[dpos + 1:hi]))
        best, best_fold = others, None
        candidate = others
        for _ in range(64):
            values[dpos] = candidate
            fold = 0.0
            for p in range(lo, hi):
                fold += values[p]
            if fold == 0.0:
                best, best_fold = candidate, 0.0
                break
            if best_fold is None or abs(fold) < best_fold:
                best, best_fold = candidate, abs(fold)
            candidate = math.nextafter(candidate, math.inf if fold < 0 else -math.inf)
        values[dpos] = best


def helmholtz_fd_2d_nonuniform(spec):
    """Centered differences on unequal spacing, Neumann walls, + d on the diagonal.

    With d=0 the operator is exactly singular (A @ ones == 0); a small d>0
    yields condition numbers growing like lambda_max / d.
    """
    if spec.family != "helmholtz2d":
        raise InvalidSpec("spec family must be helmholtz2d")
    if any(v != 0.0 for v in spec.c):
        raise InvalidSpec("helmholtz2d is convection-free (c must be 0)")
    if spec.d < 0.0:
        raise InvalidSpec("reaction coefficient d must be >= 0")
    n = spec.n_per_dim
    x = _stretched_axis(n, spec.stretch)
    west, east = _axis_stencil_1d(x)
    size = n * n

    iy, ix = np.divmod(np.arange(size), n)
    rows, cols, vals = [], [], []
    for pos, stride in ((ix, 1), (iy, n)):
        hw = pos > 0
        rows.append(np.arange(size)[hw])
        cols.append(np.arange(size)[hw] - stride)
        vals.append(west[pos[hw]])
        he = pos < n - 1
        rows.append(np.arange(size)[he])
        cols.append(np.arange(size)[he] + stride)
        vals.append(east[pos[he]])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    # provisional zero diagonal to fix the pattern, replaced below
    all_nodes = np.arange(size)
    shell = CsrMatrix.from_triplets(
        (np.concatenate([rows, all_nodes]), np.concatenate([cols, all_nodes]),
         np.concatenate([vals, np.zeros(size)])), size, size)

    values = shell.values.copy()
    _exact_zero_diagonal(shell.row_ptr, shell.col_idx, values, size)
    if spec.d > 0.0:
        dpos = shell.diag_positions()
        values[dpos] += spec.d
    A = CsrMatrix(size, size, shell.row_ptr, shell.col_idx, values, _checked=True)

    gaps = np.diff(x)
    coords = np.stack([x[ix], x[iy]], axis=1)
    b, x_exact = manufactured_rhs(A, "ones")
    meta = {"family": "helmholtz2d", "n_per_dim": n, "h_min": float(gaps.min()),
            "h_max": float(gaps.max()), "nnz": A.nnz, "symmetric": spec.stretch == 1.0,
            "coords": coords, "axis": x}
    return GeneratedProblem(A, b, x_exact, meta)
