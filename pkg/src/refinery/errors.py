"""Exception hierarchy shared across the package."""


class RefineryError(Exception):
    """Base class for all errors raised by this package."""


class RegistryError(RefineryError):
    """A reward, link or composite name is not registered."""


class DomainError(RefineryError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedRewardError(RefineryError):
    """The requested operation needs a derivative the reward does not have."""


class UnsupportedConfigError(RefineryError):
    """The configuration is valid elsewhere but not for this operation."""


class ParameterError(RefineryError):
    """A construction parameter is malformed."""


class CapacityError(ParameterError):
    """A construction parameter exceeds a configured limit."""


class EstimationError(RefineryError):
    """There is not enough usable data to estimate the requested object."""


class ShapeError(RefineryError):
    """Two operands do not share the support or shape the operation needs."""


class InputError(RefineryError):
    """An input record set or file is empty or malformed."""


class NumericalError(RefineryError):
    """A numerical routine failed to converge.

    The last estimate computed before giving up is kept on ``estimate`` so
    callers can inspect how far the routine got.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
