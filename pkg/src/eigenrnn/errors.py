"""Exception hierarchy shared by every subpackage."""


class EigenRnnError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(EigenRnnError, ValueError):
    """Operand shapes do not conform."""


class ConvergenceError(EigenRnnError, ArithmeticError):
    """An iterative solver exhausted its iteration budget."""


class DecompositionError(EigenRnnError, ArithmeticError):
    """A matrix lacks a well-conditioned eigenbasis."""


class NumericError(EigenRnnError, ArithmeticError):
    """A non-finite value appeared during a computation."""


class ConfigurationError(EigenRnnError, ValueError):
    """An invalid parameter or parameter combination."""


class FormatError(EigenRnnError, ValueError):
    """A file does not follow its expected binary or text layout."""


class GenerationError(EigenRnnError, RuntimeError):
    """A sampler could not produce the requested data."""
