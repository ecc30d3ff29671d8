"""Exception types shared across the package."""


class BudgetAggError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(BudgetAggError):
    """A vote, allocation, or profile fails validation."""


class InvalidSystemError(BudgetAggError):
    """A phantom system violates the bounds that guarantee normalization."""


class InvalidScheduleError(BudgetAggError):
    """An integral phantom schedule violates its defining conditions."""


class UnsupportedParameterError(BudgetAggError):
    """A method parameter lies outside the supported range."""


class InconsistentModelError(BudgetAggError):
    """A solver model does not select exactly one allocation per profile."""


class BudgetExceededError(BudgetAggError):
    """An exhaustive search hit its evaluation budget."""
