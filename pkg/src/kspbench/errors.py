"""Exception types shared across the library."""


class KspBenchError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(KspBenchError, ValueError):
    """Operands have incompatible shapes."""


class IndexOutOfRange(KspBenchError, IndexError):
    """A row or column index falls outside the matrix dimensions."""


class NonFiniteValue(KspBenchError, ValueError):
    """A matrix or vector entry is NaN or infinite."""


class ParseError(KspBenchError, ValueError):
    """A Matrix Market file is malformed."""


class UnsupportedFormat(KspBenchError, ValueError):
    """A Matrix Market file uses a field/format outside the supported subset."""


class ZeroDiagonal(KspBenchError, ValueError):
    """A preconditioner requires a nonzero diagonal entry that is missing or zero."""

    def __init__(self, row):
        self.row = row
        super().__init__(f"zero or missing diagonal entry in row {row}")


class ZeroPivot(KspBenchError, ArithmeticError):
    """ILU(0) hit a (near-)zero pivot and pivot shifting was not enabled."""

    def __init__(self, row):
        self.row = row
        super().__init__(f"zero pivot in row {row} during ILU(0) factorization")


class SingularCoarse(KspBenchError, ArithmeticError):
    """Dense factorization of the coarsest AMG level failed."""


class InvalidSpec(KspBenchError, ValueError):
    """A problem specification is inconsistent or out of range."""


class UnknownSolver(KspBenchError, ValueError):
    """Solver identifier not recognized by the cost model or the CLI."""


class ConfigError(KspBenchError, ValueError):
    """A benchmark suite configuration is invalid."""
