"""Per-iteration cost model for the four solvers.

``n`` is the row count, ``ell`` the average number of nonzeros per row
(nnz / n_rows, diagonal included), and ``k`` the inner iteration index
(GMRES only, since its orthogonalization cost grows with the basis).
"""

from ..errors import UnknownSolver

SOLVERS = ("gmres", "bicgstab", "tfqmr", "qmrcgstab")

# (axpy, inner products) per iteration; GMRES handled separately as k+1 each
_KERNEL_COUNTS = {"bicgstab": (6, 4), "tfqmr": (10, 4), "qmrcgstab": (8, 6)}
_STORED = {"tfqmr": 8, "bicgstab": 10, "qmrcgstab": 13}


def flop_model(solver, n, ell, k=1):
    """Floating-point operations for one iteration of ``solver``."""
    if n < 1 or ell < 1 or k < 1:
        raise ValueError("flop model needs n, ell, k >= 1")
    if solver == "gmres":
        return 2.0 * n * (ell + 2.0 * k + 2.0)
    if solver == "bicgstab":
        return 4.0 * n * (ell + 5.0)
    if solver in ("tfqmr", "qmrcgstab"):
        return 4.0 * n * (ell + 7.0)
    raise UnknownSolver(solver)


def stored_vectors(solver, k=1):
    """Workspace vectors held in addition to the matrix itself."""
    if solver == "gmres":
        return k + 5
    try:
        return _STORED[solver]
    except KeyError:
        raise UnknownSolver(solver) from None


def kernel_counts_model(solver, k=1):
    """(axpy, inner-product) operations for one iteration of ``solver``."""
    if solver == "gmres":
        return (k + 1, k + 1)
    try:
        return _KERNEL_COUNTS[solver]
    except KeyError:
        raise UnknownSolver(solver) from None


def predicted_totals(solver, n, ell, iterations, restart):
    """Accumulated (flops, axpys, dots) over a run's iteration sequence.

    GMRES restarts every ``restart`` inner steps, so its per-iteration index
    cycles 1..restart; the other methods have constant per-iteration cost.
    """
    if iterations == 0:
        return 0.0, 0, 0
    if solver != "gmres":
        flops = flop_model(solver, n, ell) * iterations
        axpy, dots = kernel_counts_model(solver)
        return flops, axpy * iterations, dots * iterations
    flops = 0.0
    axpys = dots = 0
    for it in range(iterations):
        k = it % restart + 1
        flops += flop_model("gmres", n, ell, k)
        a, d = kernel_counts_model("gmres", k)
        axpys += a
        dots += d
    return flops, axpys, dots
