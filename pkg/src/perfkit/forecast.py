"""Forecasting helpers for capacity planning."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from perfkit.errors import DomainError

__all__ = [
    "TimeSeries",
    "LinearFit",
    "SmoothingConfig",
    "SmoothingResult",
    "linear_regression",
    "moving_average",
    "mse_for_window",
    "best_window",
    "variable_weight",
    "offset_weight",
    "exp_smoothing",
    "compound_growth",
    "cumulative_growth_factor",
    "mix_shares",
    "nfu_project",
]


@dataclass(frozen=True)
class TimeSeries:
    x: tuple[float, ...]
    y: tuple[float, ...]
    unit: str = ""

    def __post_init__(self) -> None:
        x = tuple(float(v) for v in self.x)
        y = tuple(float(v) for v in self.y)
        if len(x) != len(y):
            raise DomainError("x and y differ in length")
        if any(b <= a for a, b in zip(x, x[1:])):
            raise DomainError("indices must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def of(cls, values: Iterable[float], start: float = 1, unit: str = "") -> "TimeSeries":
        y = tuple(values)
        return cls(tuple(start + i for i in range(len(y))), y, unit)

    def __len__(self) -> int:
        return len(self.y)


def _values(series: TimeSeries | Sequence[float]) -> np.ndarray:
    y = np.asarray(series.y if isinstance(series, TimeSeries) else series, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise DomainError("series must be a non-empty sequence")
    return y


@dataclass(frozen=True)
class LinearFit:
    a: float
    b: float
    mse: float

    def predict(self, x: float | np.ndarray) -> float | np.ndarray:
        return self.a + self.b * x


def linear_regression(series: TimeSeries | tuple[Sequence[float], Sequence[float]]) -> LinearFit:
    """Ordinary least squares fit of y = a + b x."""
    if isinstance(series, TimeSeries):
        x, y = np.array(series.x), np.array(series.y)
    else:
        x, y = (np.asarray(v, dtype=float) for v in series)
    if x.shape != y.shape or x.size < 2:
        raise DomainError("need at least two (x, y) points")
    xm, ym = x.mean(), y.mean()
    sxx = np.dot(x - xm, x - xm)
    if sxx == 0:
        raise DomainError("all x values are equal")
    b = float(np.dot(x - xm, y - ym) / sxx)
    a = float(ym - b * xm)
    resid = y - (a + b * x)
    return LinearFit(a, b, float(np.mean(resid ** 2)))


def moving_average(series: TimeSeries | Sequence[float], n: int) -> float:
    """Forecast for the next step: mean of the last ``n`` observations."""
    y = _values(series)
    if not 1 <= n <= y.size:
        raise DomainError(f"window {n} does not fit a series of {y.size}")
    return float(y[-n:].mean())


def mse_for_window(series: TimeSeries | Sequence[float], n: int) -> float:
    """Mean squared one-step error of the window-``n`` average.

    Only steps that have a full window behind them are scored.
    """
    y = _values(series)
    if not 1 <= n < y.size:
        raise DomainError(f"window {n} leaves nothing to score in a series of {y.size}")
    csum = np.concatenate(([0.0], np.cumsum(y)))
    preds = (csum[n:-1] - csum[:-n - 1]) / n
    return float(np.mean((y[n:] - preds) ** 2))


def best_window(series: TimeSeries | Sequence[float], windows: Iterable[int]) -> int:
    """Window with the smallest error; the shortest wins ties."""
    scored = [(mse_for_window(series, n), n) for n in sorted(set(windows))]
    if not scored:
        raise DomainError("no candidate windows")
    return min(scored)[1]


def variable_weight(n: int, m: float = 2.0, start: float | None = None) -> float:
    """Smoothing weight for the ``n``-th observation, (m*n - 1)/(m*n + 1).

    Taken literally the weight at n = 1 is (m - 1)/(m + 1), i.e. 1/3 for m = 2.
    Passing ``start`` shifts n so that the first weight equals ``start``
    while keeping the same step between consecutive weights.
    """
    if n < 1:
        raise DomainError("observation order starts at 1")
    if m < 2:
        raise DomainError("multiplier must be at least 2")
    shift = 0.0
    if start is not None:
        if not 0.0 < start < 1.0:
            raise DomainError("starting weight must lie in (0, 1)")
        shift = (1.0 + start) / ((1.0 - start) * m) - 1.0
    x = m * (n + shift)
    return (x - 1.0) / (x + 1.0)


def offset_weight(N: int, M: int) -> float:
    """Weight (M + N - 1)/(M + N + 1) for sample ``N`` after an offset ``M``."""
    if N < 1 or M < 0:
        raise DomainError("need N >= 1 and M >= 0")
    return (M + N - 1) / (M + N + 1)


@dataclass(frozen=True)
class SmoothingConfig:
    mode: Literal["fixed", "variable", "tustin"] = "fixed"
    alpha: float = 0.5
    m: float = 2.0
    start: float | None = None
    seed: float | None = None  # initial estimate; defaults to the first observation

    def __post_init__(self) -> None:
        if self.mode not in ("fixed", "variable", "tustin"):
            raise DomainError(f"unknown smoothing mode {self.mode!r}")
        if self.mode != "variable" and not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must lie in (0, 1)")
        if self.mode == "variable":
            variable_weight(1, self.m, self.start)

    def weight(self, n: int) -> float:
        return variable_weight(n, self.m, self.start) if self.mode == "variable" else self.alpha


@dataclass(frozen=True)
class SmoothingResult:
    trace: tuple[float, ...]  # estimate after seeing each observation
    weights: tuple[float, ...]

    @property
    def forecast(self) -> float:
        return self.trace[-1]


def exp_smoothing(series: TimeSeries | Sequence[float],
                  config: SmoothingConfig = SmoothingConfig()) -> SmoothingResult:
    """Exponentially smoothed estimates, one per observation.

    The first estimate is the first observation unless a seed is given.
    Tustin mode blends the previous estimate with the mean of the last two
    observations.
    """
    y = _values(series)
    f = float(y[0]) if config.seed is None else float(config.seed)
    trace = [f]
    weights = [config.weight(1)]
    for t in range(1, y.size):
        a = config.weight(t + 1)
        target = (y[t] + y[t - 1]) / 2.0 if config.mode == "tustin" else y[t]
        f = (1.0 - a) * f + a * target
        trace.append(float(f))
        weights.append(a)
    return SmoothingResult(tuple(trace), tuple(weights))


def compound_growth(base: float, rate: float, years: float) -> float:
    if rate < -1:
        raise DomainError("growth rate below -100 %")
    return base * (1.0 + rate) ** years


def cumulative_growth_factor(rate: float, periods: int) -> float:
    """Sum of (1 + rate)^k for k = 0 .. periods - 1."""
    if periods < 0 or rate < -1:
        raise DomainError("invalid growth inputs")
    return math.fsum((1.0 + rate) ** k for k in range(periods))


def mix_shares(values: Sequence[float]) -> list[float]:
    """Percent of the total contributed by each value."""
    total = math.fsum(values)
    if total <= 0 or any(v < 0 for v in values):
        raise DomainError("values must be nonnegative with a positive total")
    return [100.0 * v / total for v in values]


def nfu_project(base_demand: float, nfu_base: float = 1.0, nfu_target: float = 1.0,
                resource_growth_rate: float = 0.0, txn_per_nfu_growth_rate: float = 0.0,
                years: float = 1.0) -> float:
    """Scale a resource demand by business volume and two compound growth rates.

    ``nfu_base``/``nfu_target`` are the business-unit volumes now and at the
    horizon; the rates are per-year growth of resource use per transaction
    and of transactions per business unit.
    """
    if nfu_base <= 0 or nfu_target < 0:
        raise DomainError("business volumes must be positive")
    if resource_growth_rate < -1 or txn_per_nfu_growth_rate < -1:
        raise DomainError("growth rates below -100 %")
    return (base_demand * (nfu_target / nfu_base)
            * (1.0 + resource_growth_rate) ** years
            * (1.0 + txn_per_nfu_growth_rate) ** years)
