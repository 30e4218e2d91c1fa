"""Exception types shared across the package.

Two failure classes are distinguished so that callers (and the CLI) can
map them to different exit codes: bad inputs versus runs that went
numerically wrong despite valid inputs.
"""


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class NumericalError(RuntimeError):
    """Raised when a computation produces non-finite values or otherwise
    fails mid-run."""
