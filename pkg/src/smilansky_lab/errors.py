"""Exception hierarchy shared by all modules."""


class SmilanskyError(Exception):
    """Base class for package errors."""


class ConfigurationError(SmilanskyError):
    """Invalid model description, grid, or request parameters."""


class ComputationError(SmilanskyError):
    """A numerical routine failed to deliver its contract."""


class ConvergenceError(ComputationError):
    """Iterative solver or quadrature did not converge."""


class RefinementError(ComputationError):
    """Grid refinement or extrapolation check failed; diagnostics in the message."""
