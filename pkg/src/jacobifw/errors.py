"""Exception and warning types shared across the toolkit.

Grouped by the surface that raises them so the CLI can map them onto
exit codes (config -> 1, solver/numerics -> 2, dataset -> 3).
"""


class JacobiFWError(Exception):
    """Base class for all toolkit errors."""


# --- numerics / solver errors (CLI exit code 2) ---

class DegenerateParams(JacobiFWError):
    """A recurrence-coefficient denominator is numerically zero."""


class QuadratureUnderResolved(JacobiFWError):
    """Too few quadrature nodes for the polynomial degree."""


class NoConvergence(JacobiFWError):
    """Power iteration failed to converge within its iteration budget."""


class ZeroMatrix(JacobiFWError):
    """Singular-value routines require a nonzero matrix."""


class ShapeMismatch(JacobiFWError):
    """Operand shape incompatible with the objective's data."""


class DegenerateTestSet(JacobiFWError):
    """Normalized test error is undefined (all test ratings are zero)."""


class InfeasibleStart(JacobiFWError):
    """Solver start point lies outside the constraint set."""


class BetaZero(JacobiFWError):
    """The accelerated-rate bound is undefined at beta = 0."""


class InsufficientData(JacobiFWError):
    """Not enough trace points in the requested slope window."""


class NonpositiveGap(JacobiFWError):
    """Too few positive suboptimality values remain for a log-log fit."""


# --- dataset errors (CLI exit code 3) ---

class DataError(JacobiFWError):
    """Base class for dataset ingestion errors."""


class ParseError(DataError):
    """Malformed dataset line; carries the 1-based line number."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyDataset(DataError):
    """Dataset file contained no usable rows."""


class DuplicateRating(DataError):
    """The same (user, item) pair appears more than once."""


# --- config errors (CLI exit code 1) ---

class ConfigError(JacobiFWError):
    """Invalid or inconsistent experiment configuration."""


# --- warnings ---

class OmegaRangeWarning(UserWarning):
    """Combined step weight omega_k fell outside [0, 1]."""


class DegenerateConfigWarning(UserWarning):
    """Accelerated solver configured with a provably frozen trajectory."""
