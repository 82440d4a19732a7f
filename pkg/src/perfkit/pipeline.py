"""Access log to solved performance model in one call."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from perfkit import ingest, qnsolver, workload
from perfkit.errors import DomainError

__all__ = ["DeviceCosts", "PipelineClass", "PipelineReport", "log_edges", "run_log_pipeline"]


@dataclass(frozen=True)
class DeviceCosts:
    """Per-request service demand as a function of response size in bytes."""

    cpu_fixed: float = 1.0e-3
    cpu_per_byte: float = 2.0e-9
    disk_seek: float = 8.0e-3
    disk_rate: float = 40.0e6  # bytes per second
    cache_hit: float = 0.8
    request_bytes: int = 170
    bandwidth: float = 100e6  # bits per second

    def demands(self, size: float) -> dict[str, float]:
        disk = (1.0 - self.cache_hit) * (self.disk_seek + size / self.disk_rate)
        net = qnsolver.ethernet_transfer_demand(self.request_bytes, int(round(size)),
                                                bandwidth=self.bandwidth).demand
        return {"cpu": self.cpu_fixed + self.cpu_per_byte * size, "disk": disk, "net": net}


@dataclass(frozen=True)
class PipelineClass:
    name: str
    count: int
    mean_size: float
    share_pct: float
    rate: float


@dataclass(frozen=True)
class PipelineReport:
    records: int
    rejects: int
    T: float
    classes: tuple[PipelineClass, ...]
    model: qnsolver.OpenModel
    solution: qnsolver.SolvedNetwork

    @property
    def bottleneck(self) -> str:
        return self.model.stations[self.solution.bottleneck.index].name

    def to_text(self) -> str:
        out = [f"records {self.records}  rejected {self.rejects}  T {self.T:.1f} s"]
        out.append(f"{'class':<8}{'count':>8}{'mean B':>12}{'share %':>10}{'req/s':>10}")
        for c in self.classes:
            out.append(f"{c.name:<8}{c.count:>8}{c.mean_size:>12.1f}"
                       f"{c.share_pct:>10.3f}{c.rate:>10.5f}")
        s = self.solution
        out.append(f"lambda {s.X0:.5f}/s  R {s.R:.6f} s  N {s.N:.6f}")
        for st in s.stations:
            out.append(f"  {st.name:<5} D {st.D:.6f}  U {st.U:.5f}  R {st.R:.6f}")
        out.append(f"bottleneck {self.bottleneck}  max throughput {s.X_max:.3f}/s")
        return "\n".join(out) + "\n"


def log_edges(lo: float = 1.0, hi: float = 1e9, bins: int = 36) -> list[float]:
    return list(np.logspace(math.log10(lo), math.log10(hi), bins + 1))


def run_log_pipeline(lines: Iterable[str] | str, *, k: int = 5, T: float | None = None,
                     edges: Sequence[float] | None = None,
                     costs: DeviceCosts = DeviceCosts()) -> PipelineReport:
    """Parse, keep GETs, bin by size, merge bins into ``k`` classes, solve.

    Bins are clustered on log10 of their mean size, so classes are contiguous
    size ranges. ``T`` defaults to the span between first and last request.
    """
    log = ingest.parse_access_log(lines)
    recs = ingest.filter_records(log.records)
    if not recs:
        raise DomainError("no GET requests in the log")
    if T is None:
        stamps = [r.timestamp for r in recs]
        T = (max(stamps) - min(stamps)).total_seconds()
        if T <= 0:
            raise DomainError("log covers no time; pass T explicitly")
    groups = [g for g in ingest.classify_by_size(recs, edges or log_edges()) if g.count]
    if len(groups) < k:
        raise DomainError(f"only {len(groups)} non-empty size bins for {k} classes")
    pts = np.log10([[g.mean_size] for g in groups])
    tree = workload.mst_cluster(pts, [str(i) for i in range(len(groups))], k=k, centroid="mean")
    merged = []
    for members, _ in tree.cut(k):
        cnt = sum(groups[i].count for i in members)
        size = math.fsum(groups[i].count * groups[i].mean_size for i in members) / cnt
        merged.append((cnt, size))
    merged.sort(key=lambda cs: cs[1])
    names = [f"C{i + 1}" for i in range(len(merged))]
    wl = ingest.build_workload_model(list(zip(names, (c for c, _ in merged))), T)
    per_dev: dict[str, list[float]] = {}
    for _, size in merged:
        for dev, d in costs.demands(size).items():
            per_dev.setdefault(dev, []).append(d)
    model = ingest.workload_open_model(wl, per_dev)
    sol = qnsolver.solve_open(model)
    classes = tuple(PipelineClass(w.name, int(c), s, w.share_pct, w.rate)
                    for w, (c, s) in zip(wl, merged))
    return PipelineReport(len(log.records), len(log.rejects), T, classes, model, sol)
