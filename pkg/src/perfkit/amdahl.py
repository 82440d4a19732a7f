"""Speedup algebra for partial improvements of a system.

All times are in arbitrary but consistent units. A *fraction* is always the
share of the original execution time affected by an improvement, and a
*factor* is the local speedup of that share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from perfkit.errors import DomainError, InfeasibleError

__all__ = [
    "Improvement",
    "ImprovementSet",
    "speedup",
    "speedup_multi",
    "fraction_for",
    "factor_for",
    "improved_time",
    "fraction_before_from_after",
    "perf_cost_ratio",
    "better_option",
]


@dataclass(frozen=True)
class Improvement:
    fraction: float
    factor: float

    def __post_init__(self) -> None:
        _check_fraction(self.fraction)
        _check_factor(self.factor)


ImprovementLike = Union[Improvement, Sequence[float]]


@dataclass(frozen=True)
class ImprovementSet:
    """Disjoint improvements; whatever time they do not cover is left as is."""

    items: tuple[Improvement, ...] = ()

    def __post_init__(self) -> None:
        if self.covered > 1.0 + 1e-12:
            raise DomainError(f"fractions sum to {self.covered:.6g} > 1")

    @classmethod
    def of(cls, items: Iterable[ImprovementLike]) -> "ImprovementSet":
        return cls(tuple(_as_improvement(it) for it in items))

    @property
    def covered(self) -> float:
        return math.fsum(it.fraction for it in self.items)

    @property
    def untouched(self) -> float:
        return max(0.0, 1.0 - self.covered)


def _as_improvement(item: ImprovementLike) -> Improvement:
    if isinstance(item, Improvement):
        return item
    f, k = item
    return Improvement(float(f), float(k))


def _as_set(items: ImprovementSet | Iterable[ImprovementLike]) -> ImprovementSet:
    return items if isinstance(items, ImprovementSet) else ImprovementSet.of(items)


def _check_fraction(f: float) -> None:
    if not (0.0 <= f <= 1.0) or math.isnan(f):
        raise DomainError(f"fraction must lie in [0, 1], got {f!r}")


def _check_factor(k: float) -> None:
    if not k > 0.0:
        raise DomainError(f"factor must be positive, got {k!r}")


def speedup(f: float, k: float) -> float:
    """Overall speedup when a share ``f`` of the time runs ``k`` times faster."""
    _check_fraction(f)
    _check_factor(k)
    return 1.0 / ((1.0 - f) + f / k)


def speedup_multi(items: ImprovementSet | Iterable[ImprovementLike]) -> float:
    s = _as_set(items)
    return 1.0 / (s.untouched + math.fsum(it.fraction / it.factor for it in s.items))


def fraction_for(A: float, k: float) -> float:
    """Share of the original time that must be sped up by ``k`` to reach ``A``."""
    _check_factor(k)
    if A <= 0:
        raise DomainError(f"target speedup must be positive, got {A!r}")
    if math.isclose(A, k, rel_tol=1e-12):
        return 1.0
    if k == 1.0:
        raise DomainError("a factor of 1 cannot change the execution time")
    if (k > 1.0 and A > k) or (k < 1.0 and A < k):
        raise InfeasibleError(f"speedup {A} is unreachable with factor {k}")
    if (k > 1.0 and A < 1.0) or (k < 1.0 and A > 1.0):
        raise DomainError(f"speedup {A} points the wrong way for factor {k}")
    return k * (A - 1.0) / (A * (k - 1.0))


def factor_for(A: float, f: float) -> float:
    """Local factor needed on a share ``f`` of the time to reach speedup ``A``."""
    _check_fraction(f)
    if A < 1.0:
        raise DomainError(f"target speedup must be >= 1, got {A!r}")
    if A == 1.0:
        return 1.0
    if f == 0.0:
        raise InfeasibleError("nothing to improve when the fraction is 0")
    if f < 1.0 and A >= 1.0 / (1.0 - f):
        raise InfeasibleError(
            f"speedup {A} reaches or exceeds the limit {1.0 / (1.0 - f):.6g} for f={f}"
        )
    return A * f / (1.0 - A + A * f)


def improved_time(T: float, items: ImprovementSet | Iterable[ImprovementLike]) -> float:
    if not T > 0:
        raise DomainError(f"time must be positive, got {T!r}")
    return T / speedup_multi(items)


def fraction_before_from_after(f_after: float, k: float) -> float:
    """Convert a share measured on the improved run back to the original run.

    If a share ``f_after`` of the *improved* time was spent in code that had
    been sped up by ``k``, that code originally took ``k * f_after`` of the
    improved time while the rest stayed at ``1 - f_after``.
    """
    _check_fraction(f_after)
    _check_factor(k)
    slow = k * f_after
    return slow / ((1.0 - f_after) + slow)


def perf_cost_ratio(exec_time: float, cost: float) -> float:
    """Performance per unit cost, with performance taken as 1/time."""
    if not (exec_time > 0 and cost > 0):
        raise DomainError("time and cost must be positive")
    return 1.0 / (exec_time * cost)


def better_option(options: Sequence[tuple[float, float]]) -> int | None:
    """Index of the (time, cost) pair with the smallest product, None on a tie."""
    if not options:
        raise DomainError("no options to compare")
    products = []
    for t, c in options:
        if not (t > 0 and c > 0):
            raise DomainError("time and cost must be positive")
        products.append(t * c)
    best = min(products)
    winners = [i for i, p in enumerate(products) if math.isclose(p, best, rel_tol=1e-12)]
    return winners[0] if len(winners) == 1 else None
