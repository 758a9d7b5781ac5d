"""Exception hierarchy shared by all solver modules."""


class CenterStringError(Exception):
    """Base class for all errors raised by this package."""


class LengthMismatch(CenterStringError):
    """Two sequences that must have equal length do not."""


class AlphabetMismatch(CenterStringError):
    """Sequences over different alphabets, or a symbol outside the alphabet."""


class FrameMismatch(CenterStringError):
    """A position set indexes a different frame than the sequence it is applied to."""


class SizeMismatch(CenterStringError):
    """A patch and its position set disagree in size."""


class EmptyInput(CenterStringError):
    """An operation that needs at least one sequence received none."""


class WindowTooLong(CenterStringError):
    """The requested window length exceeds some input string."""


class BudgetExceeded(CenterStringError):
    """An exhaustive sweep would enumerate more candidates than allowed."""


class DomainError(CenterStringError):
    """A parameter is outside its documented domain."""


class EstimatorAtLeastOne(CenterStringError):
    """The conditional-expectation failure estimator starts at >= 1, so the
    derandomized guarantee cannot be certified for this epsilon."""


class NumericalFailure(CenterStringError):
    """The LP backend failed to produce a usable solution."""
