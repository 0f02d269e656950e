"""Exception types shared across the toolkit."""


class QfcHubError(Exception):
    """Base class for all toolkit errors."""


class ValidityError(QfcHubError):
    """Input lies outside a material model's stated validity domain."""


class DomainError(QfcHubError):
    """Input violates a physical or mathematical precondition."""


class RangeError(QfcHubError):
    """Index or port number outside its allowed range."""


class DegenerateError(QfcHubError):
    """Quantity is degenerate (zero trace, vanishing success probability, ...)."""


class SingularityError(QfcHubError):
    """Linear inversion is singular (e.g. tomography inputs not complete)."""


class ConvergenceError(QfcHubError):
    """Iterative solver failed to converge within its iteration budget."""


class ConfigError(QfcHubError):
    """Run configuration is malformed or inconsistent."""
