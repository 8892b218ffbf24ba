"""Algebraic multigrid preconditioners: smoothed aggregation and classical
(Ruge-Stuben first pass with direct interpolation).

Both variants build a hierarchy of Galerkin coarse operators
``A_{l+1} = P_l^T A_l P_l`` and apply one V(1,1) cycle per preconditioner
application: one forward SOR(1) pre-smoothing sweep, residual restriction,
recursion, prolongated correction, one backward SOR(1) post-smoothing sweep,
with a dense LU solve on the coarsest level.  Tie-breaking is
lowest-index-first everywhere so setups are deterministic.
"""

import heapq
import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ..backend import kernels
from ..csr import CsrMatrix
from ..errors import SingularCoarse, ZeroDiagonal
from .basic import Preconditioner


@dataclass
class AmgParams:
    theta: float = 0.08              # SA strength threshold
    strong_threshold: float = 0.25   # classical strength threshold
    max_levels: int = 20
    coarse_size_limit: int = 64
    cycle: str = "V"
    pre_sweeps: int = 1
    post_sweeps: int = 1
    smoother_omega: float = 1.0
    power_iterations: int = 10
    prolongator_damping: float = 4.0 / 3.0


@dataclass
class AmgLevel:
    A: CsrMatrix
    P: CsrMatrix
    R: CsrMatrix
    diag: np.ndarray
    strength_nnz: int = 0
    lambda_est: float = 0.0
    lambda_rel_change: float = 0.0


class AmgHierarchy(Preconditioner):
    """Built multigrid state; ``apply`` runs one V-cycle."""

    def __init__(self, kind, levels, coarse_A, coarse_lu, params, setup_seconds):
        super().__init__(levels[0].A.n_rows if levels else coarse_A.n_rows,
                         setup_seconds)
        self.kind = kind
        self.levels = levels
        self.coarse_A = coarse_A
        self.coarse_lu = coarse_lu
        self.params = params

    @property
    def n_levels(self):
        return len(self.levels) + 1

    def level_sizes(self):
        return [lvl.A.n_rows for lvl in self.levels] + [self.coarse_A.n_rows]

    def apply(self, v):
        self._check(v)
        return self._cycle(0, v)

    def _cycle(self, depth, b):
        if depth == len(self.levels):
            return lu_solve(self.coarse_lu, b)
        lvl = self.levels[depth]
        A, diag = lvl.A, lvl.diag
        impl = kernels()
        omega = self.params.smoother_omega
        x = np.zeros(A.n_rows)
        for _ in range(self.params.pre_sweeps):
            impl.sor_relax_forward(A.row_ptr, A.col_idx, A.values, diag, omega, b, x)
        r = b - A.matvec(x)
        correction = self._cycle(depth + 1, lvl.R.matvec(r))
        x += lvl.P.matvec(correction)
        for _ in range(self.params.post_sweeps):
            impl.sor_relax_backward(A.row_ptr, A.col_idx, A.values, diag, omega, b, x)
        return x


def amg_vcycle(hier, v):
    """One V-cycle approximation of A^{-1} v for the hierarchy's matrix."""
    return hier.apply(np.asarray(v, dtype=np.float64))


def hierarchy_table(hier):
    """Diagnostic dump: one `level,n,nnz,avg_row_nnz` row per level."""
    lines = ["level,n,nnz,avg_row_nnz"]
    mats = [lvl.A for lvl in hier.levels] + [hier.coarse_A]
    for l, A in enumerate(mats):
        lines.append(f"{l},{A.n_rows},{A.nnz},{A.nnz / A.n_rows:.3f}")
    return "\n".join(lines)


# ----------------------------------------------------------------------
# shared pieces
# ----------------------------------------------------------------------

def _checked_diag(A):
    diag = A.diagonal()
    zero = np.nonzero(diag == 0.0)[0]
    if zero.size:
        raise ZeroDiagonal(int(zero[0]))
    return diag


def _coarse_factorize(A):
    dense = A.to_dense()
    try:
        lu, piv = lu_factor(dense, check_finite=False)
    except Exception as exc:  # LinAlgError on hard failure
        raise SingularCoarse(f"coarse LU failed: {exc}") from exc
    if not np.all(np.isfinite(lu)) or np.any(np.diag(lu) == 0.0):
        raise SingularCoarse("coarsest-level matrix is singular")
    return lu, piv


def _expand_rows(A):
    return np.repeat(np.arange(A.n_rows, dtype=np.int64), np.diff(A.row_ptr))


def _adjacency(n, rows, cols, keep):
    """Compress a masked edge list into sorted adjacency (ptr, idx)."""
    r, c = rows[keep], cols[keep]
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(ptr, r + 1, 1)
    np.cumsum(ptr, out=ptr)
    return ptr, c  # rows already ascending, cols ascending within row


def _symmetrize(A):
    """(A + A^T) / 2 on the union pattern."""
    rows = _expand_rows(A)
    half = 0.5 * A.values
    return CsrMatrix.from_triplets(
        (np.concatenate([rows, A.col_idx]),
         np.concatenate([A.col_idx, rows]),
         np.concatenate([half, half])),
        A.n_rows, A.n_cols)


def _galerkin(A, P):
    R = P.transpose()
    return R, R.matmul(A.matmul(P))


# ----------------------------------------------------------------------
# smoothed aggregation
# ----------------------------------------------------------------------

def _sa_strength(A, theta):
    """Strong couplings |a_ij| > theta * sqrt(a_ii a_jj) on (|A|+|A^T|)/2."""
    sym = A.scaled_abs_symmetrized()
    rows = _expand_rows(sym)
    d = sym.diagonal()
    off = rows != sym.col_idx
    strong = off & (sym.values > theta * np.sqrt(d[rows] * d[sym.col_idx]))
    return _adjacency(A.n_rows, rows, sym.col_idx, strong)


def _greedy_aggregate(n, s_ptr, s_idx):
    """Two-pass greedy aggregation; returns (aggregate id per node, count)."""
    agg = np.full(n, -1, dtype=np.int64)
    n_agg = 0
    for i in range(n):
        if agg[i] >= 0:
            continue
        nbrs = s_idx[s_ptr[i]:s_ptr[i + 1]]
        if np.all(agg[nbrs] < 0):
            agg[i] = n_agg
            agg[nbrs] = n_agg
            n_agg += 1
    for i in range(n):
        if agg[i] >= 0:
            continue
        nbrs = s_idx[s_ptr[i]:s_ptr[i + 1]]
        attached = nbrs[agg[nbrs] >= 0]
        if attached.size:
            agg[i] = agg[attached[0]]
        else:
            agg[i] = n_agg
            n_agg += 1
    return agg, n_agg


def _estimate_spectral_radius(A, diag, iterations):
    """Power-iteration estimate of rho(D^{-1} A), all-ones start vector."""
    v = np.ones(A.n_rows) / np.sqrt(A.n_rows)
    lam = prev = 1.0
    for _ in range(iterations):
        w = A.matvec(v) / diag
        prev, lam = lam, float(np.linalg.norm(w))
        if lam == 0.0:
            return 1.0, 0.0
        v = w / lam
    return lam, abs(lam - prev) / lam


def _sa_prolongator(A, diag, agg, n_agg, damping, lam):
    """Smooth the piecewise-constant tentative prolongator with damped Jacobi."""
    n = A.n_rows
    tent_rows = np.arange(n, dtype=np.int64)
    omega = damping / lam
    # (D^{-1} A) P_t expressed directly on the CSR arrays: entry (i, agg[j])
    rows = _expand_rows(A)
    smooth_vals = -omega * A.values / diag[rows]
    return CsrMatrix.from_triplets(
        (np.concatenate([tent_rows, rows]),
         np.concatenate([agg, agg[A.col_idx]]),
         np.concatenate([np.ones(n), smooth_vals])),
        n, n_agg)


def sa_amg_setup(A, params=None):
    """Smoothed-aggregation hierarchy for a square matrix.

    Per level: strength graph on the symmetrized magnitude matrix, greedy
    aggregation, piecewise-constant tentative prolongator smoothed by
    ``I - (4/3)(1/lambda) D^{-1} A`` with lambda from 10 power iterations,
    then the Galerkin coarse operator.  Recursion stops at
    ``coarse_size_limit`` (64), ``max_levels`` (20), or failure to shrink.
    """
    params = params or AmgParams()
    t0 = time.perf_counter()
    levels = []
    current = A
    while (current.n_rows > params.coarse_size_limit
           and len(levels) + 1 < params.max_levels):
        diag = _checked_diag(current)
        s_ptr, s_idx = _sa_strength(current, params.theta)
        agg, n_agg = _greedy_aggregate(current.n_rows, s_ptr, s_idx)
        if n_agg >= current.n_rows:
            break  # no coarsening possible: solve this level directly
        lam, rel_change = _estimate_spectral_radius(current, diag,
                                                    params.power_iterations)
        P = _sa_prolongator(current, diag, agg, n_agg,
                            params.prolongator_damping, lam)
        R, coarse = _galerkin(current, P)
        levels.append(AmgLevel(current, P, R, diag, strength_nnz=len(s_idx),
                               lambda_est=lam, lambda_rel_change=rel_change))
        current = coarse
    coarse_lu = _coarse_factorize(current)
    return AmgHierarchy("sa-amg", levels, current, coarse_lu, params,
                        time.perf_counter() - t0)


# ----------------------------------------------------------------------
# classical (Ruge-Stuben) coarsening
# ----------------------------------------------------------------------

def _rs_strength(A, threshold):
    """Strong couplings -m_ij >= threshold * max_k(-m_ik) on (A+A^T)/2."""
    sym = _symmetrize(A)
    rows = _expand_rows(sym)
    off = rows != sym.col_idx
    neg = np.where(off, -sym.values, 0.0)
    rowmax = np.zeros(A.n_rows)
    np.maximum.at(rowmax, rows, neg)
    strong = off & (neg > 0.0) & (rowmax[rows] > 0.0) \
        & (neg >= threshold * rowmax[rows])
    return _adjacency(A.n_rows, rows, sym.col_idx, strong)


_UNASSIGNED, _CPOINT, _FPOINT = 0, 1, 2


def _rs_split(n, s_ptr, s_idx):
    """First-pass C/F splitting with lazy-deletion heap, lowest index wins ties."""
    weight = np.diff(s_ptr).astype(np.int64).copy()  # symmetric S: |S^T_i| = |S_i|
    state = np.full(n, _UNASSIGNED, dtype=np.int8)
    heap = [(-weight[i], i) for i in range(n)]
    heapq.heapify(heap)
    while heap:
        negw, i = heapq.heappop(heap)
        if state[i] != _UNASSIGNED or -negw != weight[i]:
            continue
        if weight[i] == 0:
            state[i] = _FPOINT  # isolated: smoothing-only point
            continue
        state[i] = _CPOINT
        for j in s_idx[s_ptr[i]:s_ptr[i + 1]]:
            if state[j] != _UNASSIGNED:
                continue
            state[j] = _FPOINT
            for k in s_idx[s_ptr[j]:s_ptr[j + 1]]:
                if state[k] == _UNASSIGNED:
                    weight[k] += 1
                    heapq.heappush(heap, (-weight[k], k))
    return state


def _rs_interpolation(A, s_ptr, s_idx, state):
    """Direct interpolation from strong C-neighbors (Stuben's two-sided form)."""
    n = A.n_rows
    # F-points without any strong C-neighbor cannot interpolate: promote to C
    for i in range(n):
        if state[i] == _FPOINT and s_ptr[i] < s_ptr[i + 1]:
            nbrs = s_idx[s_ptr[i]:s_ptr[i + 1]]
            if not np.any(state[nbrs] == _CPOINT):
                state[i] = _CPOINT

    coarse_id = np.cumsum(state == _CPOINT) - 1
    n_coarse = int(coarse_id[-1]) + 1 if n else 0
    rows, cols, vals = [], [], []
    for i in range(n):
        if state[i] == _CPOINT:
            rows.append(i)
            cols.append(coarse_id[i])
            vals.append(1.0)
            continue
        cidx, cval = A.row(i)
        offmask = cidx != i
        offc, offv = cidx[offmask], cval[offmask]
        a_ii = float(cval[~offmask][0]) if np.any(~offmask) else 0.0
        strong = s_idx[s_ptr[i]:s_ptr[i + 1]]
        strong_c = strong[state[strong] == _CPOINT]
        if strong_c.size == 0:
            continue  # isolated F-point: smoothing handles it, zero P row
        in_c = np.isin(offc, strong_c)
        neg_n = float(offv[offv < 0.0].sum())
        pos_n = float(offv[offv > 0.0].sum())
        neg_c = float(offv[in_c & (offv < 0.0)].sum())
        pos_c = float(offv[in_c & (offv > 0.0)].sum())
        d_ii = a_ii
        if pos_c == 0.0:
            d_ii += pos_n
            pos_n = 0.0
        if neg_c == 0.0:
            d_ii += neg_n
            neg_n = 0.0
        alpha = neg_n / neg_c if neg_c != 0.0 else 0.0
        beta = pos_n / pos_c if pos_c != 0.0 else 0.0
        for j, v in zip(offc[in_c], offv[in_c]):
            w = -(alpha if v < 0.0 else beta) * v / d_ii
            if w != 0.0:
                rows.append(i)
                cols.append(coarse_id[j])
                vals.append(w)
    if n_coarse == 0:
        return None
    return CsrMatrix.from_triplets(
        (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
         np.array(vals)), n, n_coarse)


def rs_amg_setup(A, strong_threshold=0.25, params=None):
    """Classical AMG hierarchy: RS first-pass splitting + direct interpolation.

    A level that fails to shrink falls back to a dense solve at that level.
    """
    params = params or AmgParams()
    params.strong_threshold = strong_threshold
    t0 = time.perf_counter()
    levels = []
    current = A
    while (current.n_rows > params.coarse_size_limit
           and len(levels) + 1 < params.max_levels):
        diag = _checked_diag(current)
        s_ptr, s_idx = _rs_strength(current, strong_threshold)
        state = _rs_split(current.n_rows, s_ptr, s_idx)
        P = _rs_interpolation(current, s_ptr, s_idx, state)
        if P is None or P.n_cols >= current.n_rows:
            break  # NoCoarsening: dense solve at this level
        R, coarse = _galerkin(current, P)
        levels.append(AmgLevel(current, P, R, diag, strength_nnz=len(s_idx)))
        current = coarse
    coarse_lu = _coarse_factorize(current)
    return AmgHierarchy("c-amg", levels, current, coarse_lu, params,
                        time.perf_counter() - t0)
