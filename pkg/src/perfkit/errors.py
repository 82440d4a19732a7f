"""Exception types shared across perfkit modules."""

from __future__ import annotations


class PerfkitError(Exception):
    """Base class for every error raised by perfkit."""


class DomainError(PerfkitError, ValueError):
    """An argument lies outside the domain of the operation."""


class InfeasibleError(PerfkitError, ValueError):
    """A requested target cannot be reached by any admissible input."""


class SaturationError(PerfkitError, ValueError):
    """An open network is offered more load than its bottleneck can serve."""

    def __init__(self, message: str, bottleneck: int, x_max: float):
        super().__init__(message)
        self.bottleneck = bottleneck
        self.x_max = x_max


class SingularSystemError(PerfkitError, ValueError):
    """A linear flow system has no unique solution (e.g. no exit path)."""


class ParseError(PerfkitError, ValueError):
    """Input text could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
