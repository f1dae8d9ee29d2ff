"""Exception types shared across the package (the CLI maps them to exit codes)."""


class CartanError(ValueError):
    """An input matrix or type spec does not describe a finite-type Cartan matrix."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class UnsupportedError(Exception):
    """A well-formed request the library deliberately refuses (e.g. reducible input)."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; always a bug, never bad input."""
