"""Statistics for comparing systems on a benchmark suite."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Literal, Sequence

import numpy as np

from perfkit.errors import DomainError

__all__ = [
    "MeasurementTable",
    "Orientation",
    "PairedDiffReport",
    "T_TABLE_05",
    "mean",
    "equal_time_weights",
    "normalize",
    "spec_index",
    "diffs_between",
    "critical_value",
    "paired_confidence",
    "cpi",
    "exec_time",
    "clock_rate",
    "mips",
    "mflops",
    "normalized_mflops",
]

MeanKind = Literal["arithmetic", "harmonic", "geometric"]

# Two-sided 95 % Student t quantiles, df = 1..12.
T_TABLE_05: dict[int, float] = {
    1: 12.706, 2: 4.303, 3: 3.182, 4: 2.776, 5: 2.571, 6: 2.447,
    7: 2.365, 8: 2.306, 9: 2.262, 10: 2.228, 11: 2.201, 12: 2.179,
}
NORMAL_FROM_N = 30


class Orientation(enum.Enum):
    TIME = "time"  # value(system) / value(reference): lower is better
    RATE = "rate"  # value(reference) / value(system): higher is better


@dataclass(frozen=True)
class MeasurementTable:
    programs: tuple[str, ...]
    systems: tuple[str, ...]
    values: np.ndarray  # shape (programs, systems)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(self.programs), len(self.systems)):
            raise DomainError(
                f"values shape {vals.shape} does not match "
                f"{len(self.programs)} programs x {len(self.systems)} systems"
            )
        if not np.all(vals > 0):
            raise DomainError("all measurements must be positive")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "programs", tuple(self.programs))
        object.__setattr__(self, "systems", tuple(self.systems))

    def column(self, system: str) -> np.ndarray:
        try:
            return self.values[:, self.systems.index(system)]
        except ValueError:
            raise DomainError(f"unknown system {system!r}") from None


@dataclass(frozen=True)
class PairedDiffReport:
    mean_diff: float
    std_dev: float
    half_width: float
    interval: tuple[float, float]
    critical_value: float
    distribution: Literal["t", "normal"]

    @property
    def significant(self) -> bool:
        lo, hi = self.interval
        return not (lo <= 0.0 <= hi)


def _positive(values: Sequence[float], what: str = "values") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"{what} must be a non-empty 1-D sequence")
    if not np.all(arr > 0):
        raise DomainError(f"{what} must be strictly positive")
    return arr


def _weights(weights: Sequence[float] | None, n: int) -> np.ndarray:
    if weights is None:
        return np.full(n, 1.0 / n)
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise DomainError(f"expected {n} weights, got {w.shape}")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
        raise DomainError("weights must be nonnegative and sum to 1")
    return w


def mean(values: Sequence[float], kind: MeanKind = "arithmetic",
         weights: Sequence[float] | None = None) -> float:
    if kind == "arithmetic":
        x = np.asarray(values, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise DomainError("values must be a non-empty 1-D sequence")
        return float(np.dot(_weights(weights, x.size), x))
    x = _positive(values)
    w = _weights(weights, x.size)
    if kind == "harmonic":
        return float(1.0 / np.dot(w, 1.0 / x))
    if kind == "geometric":
        return float(np.exp(np.dot(w, np.log(x))))
    raise DomainError(f"unknown mean kind {kind!r}")


def equal_time_weights(times: Sequence[float]) -> np.ndarray:
    """Weights that make every program contribute the same time to a weighted run."""
    inv = 1.0 / _positive(times, "times")
    return inv / inv.sum()


def normalize(table: MeasurementTable, reference: str,
              orientation: Orientation = Orientation.TIME) -> MeasurementTable:
    ref = table.column(reference)[:, None]
    ratios = table.values / ref if orientation is Orientation.TIME else ref / table.values
    return MeasurementTable(table.programs, table.systems, ratios)


def spec_index(ref_times: Sequence[float], sys_times: Sequence[float]) -> float:
    """100 times the geometric mean of reference/system time ratios.

    Published indices are this value rounded to an integer.
    """
    ref = _positive(ref_times, "reference times")
    sys_ = _positive(sys_times, "system times")
    if ref.shape != sys_.shape:
        raise DomainError("reference and system lengths differ")
    return 100.0 * mean(ref / sys_, "geometric")


def diffs_between(a: Sequence[float], b: Sequence[float]) -> np.ndarray:
    """Per-program signed differences a - b."""
    x, y = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if x.shape != y.shape:
        raise DomainError("paired samples must have the same length")
    return x - y


def critical_value(alpha: float, df: int) -> tuple[float, Literal["t", "normal"]]:
    """Two-sided critical value; the normal quantile is used from df+1 >= 30."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if df < 1:
        raise DomainError("at least two observations are required")
    if df + 1 >= NORMAL_FROM_N:
        return NormalDist().inv_cdf(1.0 - alpha / 2.0), "normal"
    if math.isclose(alpha, 0.05) and df in T_TABLE_05:
        return T_TABLE_05[df], "t"
    from scipy.stats import t as student_t

    return float(student_t.ppf(1.0 - alpha / 2.0, df)), "t"


def paired_confidence(diffs: Sequence[float], alpha: float = 0.05) -> PairedDiffReport:
    d = np.asarray(diffs, dtype=float)
    if d.ndim != 1 or d.size < 2:
        raise DomainError("need at least two paired differences")
    n = d.size
    m = float(d.mean())
    s = float(d.std(ddof=1))
    crit, dist = critical_value(alpha, n - 1)
    h = crit * s / math.sqrt(n)
    return PairedDiffReport(m, s, h, (m - h, m + h), crit, dist)


def cpi(mix: Sequence[tuple[float, float]]) -> float:
    """Average cycles per instruction from (count, cycles) pairs."""
    counts = np.array([c for c, _ in mix], dtype=float)
    cycles = np.array([k for _, k in mix], dtype=float)
    if counts.size == 0 or counts.sum() <= 0 or np.any(counts < 0) or np.any(cycles <= 0):
        raise DomainError("instruction mix needs nonnegative counts and positive cycles")
    return float(np.dot(counts, cycles) / counts.sum())


def exec_time(instructions: float, cpi_: float, cycle_time: float) -> float:
    if min(instructions, cpi_, cycle_time) <= 0:
        raise DomainError("inputs must be positive")
    return instructions * cpi_ * cycle_time


def clock_rate(instructions: float, cpi_: float, time: float) -> float:
    """Clock frequency (Hz) that runs the given work in ``time`` seconds."""
    if min(instructions, cpi_, time) <= 0:
        raise DomainError("inputs must be positive")
    return instructions * cpi_ / time


def mips(instructions: float, time: float) -> float:
    if time <= 0:
        raise DomainError("time must be positive")
    return instructions / (time * 1e6)


def mflops(flops: float, time: float) -> float:
    if time <= 0:
        raise DomainError("time must be positive")
    return flops / (time * 1e6)


def normalized_mflops(op_counts: Sequence[tuple[float, float]], time: float) -> float:
    """MFLOPS where each operation kind counts as ``weight`` plain flops."""
    return mflops(math.fsum(n * w for n, w in op_counts), time)
