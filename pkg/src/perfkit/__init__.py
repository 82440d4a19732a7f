"""Performance evaluation toolkit: laws, queueing models, workloads, forecasts."""

from perfkit.errors import (
    DomainError,
    InfeasibleError,
    ParseError,
    PerfkitError,
    SaturationError,
    SingularSystemError,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "InfeasibleError",
    "ParseError",
    "PerfkitError",
    "SaturationError",
    "SingularSystemError",
    "__version__",
]
