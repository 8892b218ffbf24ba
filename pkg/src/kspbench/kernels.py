"""Counted solve-path kernels.

Every Krylov solver routes its matrix-vector products, inner products and
vector updates through these functions with an explicit ``OpCounters``
object, so per-iteration operation counts can be audited against the
published cost model.  Counting is opt-in: ``counters=None`` performs the
same arithmetic without bookkeeping (preconditioner internals and oracle
checks use that path, since the cost model excludes preconditioner work).

Modeled FLOP conventions: ``spmv`` 2*nnz, ``dot``/``norm2``/``axpy`` 2n,
``scale`` n.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


@dataclass
class OpCounters:
    """Operation tallies for one solve; monotone while the solve runs."""

    matvecs: int = 0
    axpys: int = 0
    dots: int = 0
    modeled_flops: int = 0

    def reset(self):
        self.matvecs = self.axpys = self.dots = self.modeled_flops = 0

    def copy(self):
        return OpCounters(self.matvecs, self.axpys, self.dots, self.modeled_flops)


def _check_len(v, w):
    if v.shape != w.shape:
        raise DimensionMismatch(f"vector lengths differ: {v.shape} vs {w.shape}")


def spmv(A, x, counters=None, out=None):
    """y = A @ x; counts one matvec when a counting context is supplied."""
    y = A.matvec(x, out=out)
    if counters is not None:
        counters.matvecs += 1
        counters.modeled_flops += 2 * A.nnz
    return y


def dot(v, w, counters=None):
    _check_len(v, w)
    if counters is not None:
        counters.dots += 1
        counters.modeled_flops += 2 * v.shape[0]
    return float(np.dot(v, w))


def norm2(v, counters=None):
    """Euclidean norm; tallied as one inner product (the cost model's extra dot)."""
    if counters is not None:
        counters.dots += 1
        counters.modeled_flops += 2 * v.shape[0]
    return float(np.linalg.norm(v))


def axpy(alpha, x, y, counters=None, out=None):
    """alpha*x + y, optionally into ``out`` (which may alias ``y``)."""
    _check_len(x, y)
    if counters is not None:
        counters.axpys += 1
        counters.modeled_flops += 2 * x.shape[0]
    if out is None:
        return alpha * x + y
    if out is y:
        out += alpha * x
    else:
        np.multiply(x, alpha, out=out)
        out += y
    return out


def scale(alpha, x, counters=None, out=None):
    if counters is not None:
        counters.modeled_flops += x.shape[0]
    if out is None:
        return alpha * x
    np.multiply(x, alpha, out=out)
    return out


def true_residual_check(A, b, x, counters=None):
    """||b - A x||_2 / ||b||_2, evaluated explicitly (costs one matvec).

    When ``||b|| == 0`` the unscaled residual norm ``||A x||_2`` is returned.
    """
    if A.n_cols != x.shape[0] or A.n_rows != b.shape[0]:
        raise DimensionMismatch("true_residual_check: incompatible shapes")
    r = spmv(A, x, counters=counters)
    np.subtract(b, r, out=r)
    bnorm = float(np.linalg.norm(b))
    rnorm = float(np.linalg.norm(r))
    return rnorm / bnorm if bnorm > 0.0 else rnorm
