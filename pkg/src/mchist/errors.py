"""Exception hierarchy shared by all modules."""


class MCHError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(MCHError, ValueError):
    """Invalid argument or violated precondition."""


class DomainError(ParameterError):
    """Argument outside the domain of a map (e.g. z = 0 in the uniformization)."""


class SingularityError(DomainError):
    """Evaluation at a genuine singularity of the phase function."""


class DegeneracyError(ParameterError):
    """Coincident orbit points or degenerate normalization."""


class NumericalError(MCHError, ArithmeticError):
    """A computation ran but did not meet its accuracy contract."""


class AccuracyError(NumericalError):
    pass


class QuadratureError(AccuracyError):
    pass


class SpectralSingularityError(NumericalError):
    """a(z) vanishes (numerically) on the real line."""


class SearchError(NumericalError):
    pass


class PoleError(NumericalError):
    pass


class SolveError(NumericalError):
    pass


class ReconstructionError(NumericalError):
    pass


class BranchError(NumericalError):
    pass


class InversionError(NumericalError):
    pass


class InstabilityError(NumericalError):
    pass


class FitError(NumericalError):
    pass


class ConfigError(MCHError):
    pass


class DataIOError(MCHError, OSError):
    """Unreadable, malformed or unwritable data file."""
