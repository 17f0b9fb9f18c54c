"""Exception types shared by all modules."""


class ValidationError(ValueError):
    """Invalid input data.  `witness` pins the offending pair/triple when known."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceCapError(RuntimeError):
    """Request exceeds a configured size cap (CLI exit status 2)."""
