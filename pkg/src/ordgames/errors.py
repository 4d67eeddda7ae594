"""Shared exception types."""


class OrdgamesError(Exception):
    """Base class for package errors."""


class FormulaError(OrdgamesError):
    """Syntax or scoping problem in a formula.

    Carries the offset into the source text when one is known.
    """

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = "%s (at offset %d)" % (message, position)
        super().__init__(message)


class OrdinalError(OrdgamesError):
    """Malformed ordinal expression or code literal."""


class ResourceLimit(OrdgamesError):
    """A configured budget was exceeded; partial progress is reported.

    `progress` is a short human-readable description of how far the
    computation got before hitting the cap.
    """

    def __init__(self, message, progress=None):
        self.progress = progress
        if progress:
            message = "%s [progress: %s]" % (message, progress)
        super().__init__(message)


class StrategyError(OrdgamesError):
    """Structurally inconsistent strategy object (missing branch, bad key)."""


class GameValueError(OrdgamesError):
    """Ill-posed game description (bad letter map, role, or length)."""
