"""Exception hierarchy shared across the package."""


class NSEError(Exception):
    """Base class for errors raised by nsesched."""


class GameValidationError(NSEError, ValueError):
    """A game, coverage set or profile is structurally malformed."""


class OracleError(NSEError, RuntimeError):
    """The LP backend failed to solve a problem."""

    def __init__(self, message, status=None):
        super().__init__(message)
        self.status = status


class PreconditionError(NSEError):
    """An algorithm was called on a game outside its assumptions."""


class MonotoneViolation(PreconditionError):
    def __init__(self, witness):
        i, z, (j, t) = witness
        super().__init__(
            f"schedule {z} of defender {i + 1} is not monotone: "
            f"target {j + 1} is preferred over {t + 1} but receives more coverage"
        )
        self.witness = witness


class PathCapExceeded(NSEError):
    def __init__(self, count, cap):
        super().__init__(f"network has {count} source-sink paths, above the cap of {cap}")
        self.count = count
        self.cap = cap


class ExistenceViolated(NSEError, RuntimeError):
    """No target passed the equilibrium test; indicates a tolerance bug."""
