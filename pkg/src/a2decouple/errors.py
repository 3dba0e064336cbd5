class A2Error(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(A2Error, ValueError):
    pass


class StabilityError(A2Error):
    """Charge form is not positive definite."""


class InstabilityError(A2Error):
    """The flux form has a negative direction (superradiant-type instability)."""


class FitError(A2Error):
    pass


class ParameterError(A2Error, ValueError):
    pass
