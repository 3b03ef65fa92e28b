"""Exception hierarchy shared by all modules."""


class RelconeError(Exception):
    """Base class for errors raised by relcone."""


class ConductorCapExceeded(RelconeError, ValueError):
    """A cyclotomic conductor grew beyond the configured cap."""


class UndefinedInitial(RelconeError, ValueError):
    """Initial form requested for a series with no known nonzero term."""


class InnerOrderZero(RelconeError, ValueError):
    pass


class NotUnitSeries(RelconeError, ValueError):
    pass


class NotOrderOne(RelconeError, ValueError):
    pass


class PrecisionExhausted(RelconeError):
    """The truncation order is too low to decide the requested quantity.

    ``context`` names the branch (or pair of branches) and the operation so
    that callers can report which input needs more terms.
    """

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = context


class FieldExtensionRequired(RelconeError):
    """A k-th root is needed that is not rational times a root of unity."""

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = context


class InconsistentChart(RelconeError, ValueError):
    pass


class EqualPoints(RelconeError, ValueError):
    pass


class AllDegenerate(RelconeError):
    """Every sampled secant was shorter than the degeneracy floor."""


class ParseError(RelconeError, ValueError):
    pass
