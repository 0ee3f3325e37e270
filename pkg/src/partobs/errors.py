"""Exception hierarchy shared by all estimators and the command line."""


class PartObsError(Exception):
    """Base class for library errors."""


class ConfigurationError(PartObsError, ValueError):
    """Invalid kernel, bandwidth, window or run configuration."""


class DegenerateInputError(PartObsError, ValueError):
    """Input data cannot support the requested computation (e.g. constant x)."""


class DataError(PartObsError, ValueError):
    """Records violate the sampling condition of their design or are malformed."""


class NotEstimableError(PartObsError, ArithmeticError):
    """An estimator has a zero denominator at the requested point."""


class IdentifiabilityError(NotEstimableError):
    """The fitted curve leaves too much probability mass outside the observed range."""

    def __init__(self, message, tail_mass=None):
        super().__init__(message)
        self.tail_mass = tail_mass


class InfeasibleDesignError(PartObsError, RuntimeError):
    """Rejection sampling accepts too few draws to be practical."""
