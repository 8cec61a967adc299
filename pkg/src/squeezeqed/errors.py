"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """A propagator failed its norm/trace/positivity checks.

    Carries a ``diagnostics`` dict with the offending quantities so callers
    (and the CLI, which maps this to exit code 3) can report what went wrong.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class TruncationError(RuntimeError):
    """State support reached the Fock cutoff beyond the allowed tolerance."""


class UnsupportedTargetError(KeyError):
    """Requested synthesis target has no rule in the construction table."""


class ValidationError(ValueError):
    """Scenario or config input failed validation (CLI exit code 2)."""
