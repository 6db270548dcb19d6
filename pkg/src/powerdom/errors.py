"""Exceptions shared across the toolkit."""


class PowerDomError(Exception):
    """Base class for all toolkit errors."""


class ParseError(PowerDomError):
    """Malformed instance or circuit file; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InfeasibleInstanceError(PowerDomError):
    """The extension instance admits no feasible solution."""


class GuardExceededError(PowerDomError):
    """An enumeration guard (instance too large for brute force) was hit."""
