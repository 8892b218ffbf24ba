"""kspbench: preconditioned Krylov solvers for sparse nonsymmetric systems.

Four right-preconditioned subspace methods (restarted GMRES, TFQMR,
BiCGSTAB, QMRCGSTAB), five preconditioner families (Jacobi,
Gauss-Seidel/SOR, ILU(0), smoothed-aggregation AMG, classical AMG), PDE
test-matrix generators, and a benchmark CLI with instrumented operation
counting.
"""

from . import backend
from .csr import CsrMatrix
from .errors import (ConfigError, DimensionMismatch, IndexOutOfRange,
                     InvalidSpec, KspBenchError, NonFiniteValue, ParseError,
                     SingularCoarse, UnknownSolver, UnsupportedFormat,
                     ZeroDiagonal, ZeroPivot)
from .kernels import OpCounters, axpy, dot, norm2, scale, spmv, true_residual_check
from .mmio import (read_matrix_market, read_vector_market, write_matrix_market,
                   write_vector_market)
from .precond import (AmgHierarchy, AmgParams, IluFactors, Preconditioner,
                      amg_vcycle, gs_setup, gs_sor_apply, hierarchy_table,
                      identity_setup, ilu0_factor, ilu0_setup, ilu_apply,
                      jacobi_setup, rs_amg_setup, sa_amg_setup, sor_setup)
from .problems import (GeneratedProblem, ProblemSpec, fd_conv_diff_2d,
                       fd_conv_diff_3d, fem_p1_conv_diff_2d, generate,
                       helmholtz_fd_2d_nonuniform, manufactured_rhs)
from .solvers import (SolveOptions, SolveReport, Status, bicgstab,
                      gmres_restarted, qmrcgstab, solve, tfqmr)

__version__ = "0.1.0"

csr_from_triplets = CsrMatrix.from_triplets
