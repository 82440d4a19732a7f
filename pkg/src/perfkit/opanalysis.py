"""Operational laws over finite observation windows.

Quantities follow the usual operational notation: T observation length,
A arrivals, C completions, B busy time, V visits per job, S service time per
visit, X throughput, U utilization, R response time, N jobs present, Z think
time. Rates use SI prefixes; only storage sizes may be binary.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from perfkit.errors import DomainError, SingularSystemError

__all__ = [
    "DeviceObservation",
    "OperationalMetrics",
    "RoutingMatrix",
    "PIVOT_EPS",
    "derive_metrics",
    "flow_balance_error",
    "little_n",
    "little_r",
    "little_x",
    "forced_flow",
    "system_throughput",
    "general_response_time",
    "interactive_response_time",
    "solve_linear",
    "visit_ratios",
    "routing_from_visits",
    "disk_service_time",
    "cached_service_time",
    "audit",
]

PIVOT_EPS = 1e-12


@dataclass(frozen=True)
class DeviceObservation:
    T: float
    A: int
    C: int
    B: float

    def __post_init__(self) -> None:
        if not self.T > 0:
            raise DomainError("observation length must be positive")
        if self.A < 0 or self.C < 0:
            raise DomainError("counts must be nonnegative")
        if not 0 <= self.B <= self.T:
            raise DomainError("busy time must lie within [0, T]")


@dataclass(frozen=True)
class OperationalMetrics:
    lam: float
    X: float
    U: float
    S: float | None  # None when nothing completed

    def consistent(self, tol: float = 1e-9) -> bool:
        return self.S is None or math.isclose(self.U, self.X * self.S, rel_tol=tol, abs_tol=tol)


@dataclass(frozen=True)
class RoutingMatrix:
    """Transition probabilities with index 0 standing for the outside world.

    Row 0 holds the entry distribution of arriving jobs, column 0 the exit
    probabilities.
    """

    p: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.p, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 2:
            raise DomainError("routing matrix must be square with at least one device")
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
            raise DomainError("routing probabilities must lie in [0, 1]")
        if not np.allclose(p.sum(axis=1), 1.0, atol=1e-9):
            raise DomainError("every routing row must sum to 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def devices(self) -> int:
        return self.p.shape[0] - 1


def derive_metrics(obs: DeviceObservation) -> OperationalMetrics:
    return OperationalMetrics(
        lam=obs.A / obs.T,
        X=obs.C / obs.T,
        U=obs.B / obs.T,
        S=obs.B / obs.C if obs.C > 0 else None,
    )


def flow_balance_error(A: float, C: float) -> float:
    if not C > 0:
        raise DomainError("completions must be positive")
    return abs(A - C) / C


def little_n(X: float, R: float) -> float:
    return X * R


def little_r(N: float, X: float) -> float:
    if not X > 0:
        raise DomainError("throughput must be positive")
    return N / X


def little_x(N: float, R: float) -> float:
    if not R > 0:
        raise DomainError("response time must be positive")
    return N / R


def forced_flow(X0: float, V: float) -> float:
    return X0 * V


def system_throughput(X: float, V: float) -> float:
    if not V > 0:
        raise DomainError("visit ratio must be positive")
    return X / V


def general_response_time(visits: Sequence[float], device_R: Sequence[float]) -> float:
    if len(visits) != len(device_R):
        raise DomainError("visits and response times differ in length")
    if any(v < 0 for v in visits) or any(r < 0 for r in device_R):
        raise DomainError("visits and response times must be nonnegative")
    return math.fsum(v * r for v, r in zip(visits, device_R))


def interactive_response_time(N: float, X: float, Z: float = 0.0) -> float:
    """R = N/X - Z. A negative result means the inputs are mutually inconsistent."""
    if not X > 0:
        raise DomainError("throughput must be positive")
    R = N / X - Z
    if R < 0:
        warnings.warn(f"negative response time {R:.6g}: N, X and Z are inconsistent",
                      RuntimeWarning, stacklevel=2)
    return R


def solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a x = b`` by LU with partial pivoting, rejecting tiny pivots."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = lu_factor(a, check_finite=True)
    if np.any(np.abs(np.diag(lu)) < PIVOT_EPS):
        raise SingularSystemError("flow equations are singular (is there a path to the exit?)")
    return lu_solve((lu, piv), b)


def visit_ratios(routing: RoutingMatrix | np.ndarray) -> np.ndarray:
    """Visits per job to each device; the outside world has V0 = 1.

    Returns an array of length ``devices + 1`` whose element 0 is 1.
    """
    r = routing if isinstance(routing, RoutingMatrix) else RoutingMatrix(routing)
    p = r.p
    inner = p[1:, 1:]
    entry = p[0, 1:]
    v = solve_linear(np.eye(r.devices) - inner.T, entry)
    if np.any(v < -1e-9):
        raise SingularSystemError("negative visit ratio: routing has no proper exit")
    return np.concatenate(([1.0], v))


def routing_from_visits(visits: Sequence[float]) -> RoutingMatrix:
    """Central-server routing reproducing ``visits`` (first entry is the hub).

    Jobs enter at the hub, go from the hub to peripheral j with probability
    V_j/V_hub and always return to the hub. Surplus hub visits beyond
    1 + sum(peripherals) become a self-loop.
    """
    v = np.asarray(visits, dtype=float)
    if v.ndim != 1 or v.size == 0 or np.any(v < 0):
        raise DomainError("visits must be a non-empty nonnegative sequence")
    hub, per = v[0], v[1:]
    need = 1.0 + per.sum()
    if hub < need - 1e-9:
        raise DomainError(f"hub visits {hub} below 1 + peripheral visits {need}")
    n = v.size
    p = np.zeros((n + 1, n + 1))
    p[0, 1] = 1.0
    p[1, 0] = 1.0 / hub
    p[1, 2:] = per / hub
    p[1, 1] = max(0.0, 1.0 - need / hub)
    p[2:, 1] = 1.0
    return RoutingMatrix(p)


def disk_service_time(seek: float, latency: float, block_bytes: float, rate: float,
                      blocks: int = 1,
                      placement: Literal["random", "sequential"] = "random") -> float:
    """Time to read ``blocks`` blocks; ``rate`` is in bytes per second (SI)."""
    if min(seek, latency) < 0 or not (block_bytes > 0 and rate > 0) or blocks < 0:
        raise DomainError("invalid disk parameters")
    if blocks == 0:
        return 0.0
    transfer = block_bytes / rate
    if placement == "random":
        return blocks * (seek + latency + transfer)
    if placement == "sequential":
        return seek + latency + blocks * transfer
    raise DomainError(f"unknown placement {placement!r}")


def cached_service_time(controller: float, p_hit: float, miss_time: float) -> float:
    if not 0.0 <= p_hit <= 1.0:
        raise DomainError("hit probability must lie in [0, 1]")
    return controller + (1.0 - p_hit) * miss_time


def audit(X: float, S: float | None = None, U: float | None = None,
          R: float | None = None, N: float | None = None, tol: float = 1e-9) -> list[str]:
    """Names of the laws (utilization, Little) violated by a bundle of metrics."""
    bad = []
    if S is not None and U is not None and not math.isclose(U, X * S, rel_tol=tol, abs_tol=tol):
        bad.append("utilization")
    if R is not None and N is not None and not math.isclose(N, X * R, rel_tol=tol, abs_tol=tol):
        bad.append("little")
    return bad
