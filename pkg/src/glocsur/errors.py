class GlocsurError(Exception):
    """Base class for errors raised by this package."""


class MalformedInputError(GlocsurError, ValueError):
    """Input data is inconsistent: bad shapes, non-subgroups, invalid actions.

    ``path`` names the offending location in a problem file when known.
    """

    def __init__(self, message: str, path: str | None = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class InvariantViolation(GlocsurError, AssertionError):
    """An implication that must hold mathematically was observed to fail."""
