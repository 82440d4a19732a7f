"""Parsers for monitor reports and web access logs.

Every parser either returns typed records or reports the offending line.
Monitor output is split on whitespace and, where a header exists, columns
are matched by name rather than position.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, time as dtime, timedelta, timezone
from typing import Iterable, Literal, Mapping, Sequence, Union

from perfkit.errors import DomainError, ParseError
from perfkit.qnsolver import OpenModel, Station, format_model

__all__ = [
    "VmstatSample",
    "VmstatReport",
    "SarRow",
    "GprofRow",
    "GprofFlatProfile",
    "ScaleProc",
    "SetCalls",
    "SetMsPerCall",
    "GprofWhatIf",
    "TopSummary",
    "AccessLogRecord",
    "AccessLog",
    "SizeGroup",
    "WorkloadClass",
    "parse_number",
    "parse_vmstat",
    "summarize",
    "parse_sar",
    "format_sar",
    "time_filter",
    "monitor_overhead",
    "interval_for",
    "monitor_exec_time",
    "log_volume",
    "parse_gprof",
    "gprof_what_if",
    "parse_top_summary",
    "parse_access_log",
    "filter_records",
    "classify_by_size",
    "build_workload_model",
    "workload_open_model",
    "workload_model_file",
    "synthetic_access_log",
]

Decimal = Literal[".", ","]


def parse_number(token: str, decimal: Decimal = ".") -> float:
    """Parse a report number; with ``decimal=","`` dots are thousands separators."""
    t = token.strip()
    if decimal == ",":
        t = t.replace(".", "").replace(",", ".")
    return float(t)


# -- vmstat -------------------------------------------------------------------

VMSTAT_FIELDS = ("r", "b", "w", "swpd", "free", "buff", "cache", "si", "so",
                 "bi", "bo", "in", "cs", "us", "sy", "id")


@dataclass(frozen=True)
class VmstatSample:
    """One vmstat line. Columns missing from the report are None."""

    r: float | None = None
    b: float | None = None
    w: float | None = None
    swpd: float | None = None
    free: float | None = None
    buff: float | None = None
    cache: float | None = None
    si: float | None = None
    so: float | None = None
    bi: float | None = None
    bo: float | None = None
    in_: float | None = None
    cs: float | None = None
    us: float | None = None
    sy: float | None = None
    id: float | None = None
    extra: Mapping[str, float] = field(default_factory=dict)

    def get(self, column: str) -> float | None:
        if column == "in":
            return self.in_
        if column in VMSTAT_FIELDS:
            return getattr(self, column)
        return self.extra.get(column)


@dataclass(frozen=True)
class VmstatReport:
    samples: tuple[VmstatSample, ...]
    rejects: tuple[tuple[int, str], ...] = ()


def _vmstat_problem(s: VmstatSample) -> str | None:
    pcts = [v for v in (s.us, s.sy, s.id) if v is not None]
    if any(not 0 <= v <= 100 for v in pcts):
        return "cpu percentage outside [0, 100]"
    if sum(pcts) > 102:
        return "us + sy + id exceeds 100"
    return None


def parse_vmstat(text: str, *, drop_first: bool = True, decimal: Decimal = ".",
                 strict: bool = True) -> VmstatReport:
    """Parse a vmstat dump.

    The first data row reports averages since boot and is dropped by default.
    Rows violating the percentage invariants are rejected, never averaged.
    Malformed rows raise in strict mode and are rejected otherwise.
    """
    header: list[str] | None = None
    samples: list[VmstatSample] = []
    rejects: list[tuple[int, str]] = []
    first = True
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0] == "procs":
            continue
        if header is None or not _numeric(tokens[0], decimal):
            if "r" in tokens and "us" in tokens:
                header = tokens
                continue
            if header is None:
                raise ParseError("data before the column header", line=lineno)
        try:
            if len(tokens) != len(header):
                raise ParseError(f"expected {len(header)} columns, got {len(tokens)}", line=lineno)
            values = [parse_number(t, decimal) for t in tokens]
        except (ParseError, ValueError) as exc:
            msg = str(exc) if isinstance(exc, ParseError) else f"line {lineno}: {exc}"
            if strict:
                raise ParseError(msg.split(": ", 1)[-1], line=lineno) from None
            rejects.append((lineno, msg))
            continue
        if first and drop_first:
            first = False
            continue
        first = False
        known, extra = {}, {}
        for name, v in zip(header, values):
            if name == "in":
                known["in_"] = v
            elif name in VMSTAT_FIELDS:
                known[name] = v
            else:
                extra[name] = v
        sample = VmstatSample(**known, extra=extra)
        problem = _vmstat_problem(sample)
        if problem:
            rejects.append((lineno, problem))
        else:
            samples.append(sample)
    return VmstatReport(tuple(samples), tuple(rejects))


def _numeric(token: str, decimal: Decimal) -> bool:
    try:
        parse_number(token, decimal)
    except ValueError:
        return False
    return True


def summarize(samples: Iterable[VmstatSample]) -> dict[str, float]:
    """Column means over the given samples."""
    rows = list(samples)
    if not rows:
        raise DomainError("no samples to summarize")
    cols = [c for c in VMSTAT_FIELDS if rows[0].get(c) is not None]
    cols += list(rows[0].extra)
    return {c: math.fsum(r.get(c) for r in rows) / len(rows) for c in cols}


# -- sar ----------------------------------------------------------------------

SAR_COLUMNS = {
    "u": ("CPU", "%user", "%nice", "%system", "%idle"),
    "d": ("DEV", "tps", "sect/s"),
    "b": ("tps", "rtps", "wtps", "bread/s", "bwrtn/s"),
}
_TEXT_COLUMNS = {"CPU", "DEV"}


@dataclass(frozen=True)
class SarRow:
    timestamp: dtime
    values: Mapping[str, float | str]

    def __getitem__(self, column: str) -> float | str:
        return self.values[column]


def _clock(token: str, lineno: int) -> dtime:
    try:
        return dtime.fromisoformat(token if len(token) > 5 else token + ":00")
    except ValueError:
        raise ParseError(f"bad timestamp {token!r}", line=lineno) from None


def parse_sar(text: str, kind: Literal["u", "d", "b"], decimal: Decimal = ".") -> list[SarRow]:
    """Rows of a textual sar report (``-u``/``-U``, ``-d`` or ``-b``)."""
    if kind not in SAR_COLUMNS:
        raise DomainError(f"unsupported sar report kind {kind!r}")
    expected = SAR_COLUMNS[kind]
    columns: Sequence[str] = expected
    rows: list[SarRow] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0] in ("$", "...", "Average:") or not tokens[0][:1].isdigit():
            continue
        ts, rest = tokens[0], tokens[1:]
        if any(t in expected and t not in _TEXT_COLUMNS for t in rest):
            if set(rest) != set(expected):
                raise ParseError(f"columns {rest} do not match a -{kind} report", line=lineno)
            columns = rest
            continue
        if len(rest) != len(columns):
            raise ParseError(f"expected {len(columns)} values, got {len(rest)}", line=lineno)
        vals: dict[str, float | str] = {}
        for name, tok in zip(columns, rest):
            if name in _TEXT_COLUMNS:
                vals[name] = tok
            else:
                try:
                    vals[name] = parse_number(tok, decimal)
                except ValueError:
                    raise ParseError(f"bad number {tok!r} in column {name}", line=lineno) from None
        rows.append(SarRow(_clock(ts, lineno), vals))
    return rows


def format_sar(rows: Sequence[SarRow], kind: Literal["u", "d", "b"],
               header_time: dtime = dtime(0, 0)) -> str:
    cols = SAR_COLUMNS[kind]
    out = ["  ".join([header_time.strftime("%H:%M:%S"), *cols])]
    for r in rows:
        cells = [str(r[c]) if c in _TEXT_COLUMNS else f"{r[c]:.2f}" for c in cols]
        out.append("  ".join([r.timestamp.strftime("%H:%M:%S"), *cells]))
    return "\n".join(out) + "\n"


def time_filter(rows: Iterable[SarRow], start: dtime | str | None = None,
                end: dtime | str | None = None) -> list[SarRow]:
    """Rows with start <= timestamp <= end."""
    s = dtime.fromisoformat(start) if isinstance(start, str) else start
    e = dtime.fromisoformat(end) if isinstance(end, str) else end
    return [r for r in rows
            if (s is None or r.timestamp >= s) and (e is None or r.timestamp <= e)]


# -- monitor overhead ----------------------------------------------------------

def monitor_exec_time(instructions: float, mips: float) -> float:
    if instructions < 0 or mips <= 0:
        raise DomainError("need nonnegative instructions and positive MIPS")
    return instructions / (mips * 1e6)


def monitor_overhead(exec_time: float, interval: float) -> float:
    """Fraction of time consumed by a monitor that runs once per interval."""
    if exec_time < 0 or interval <= 0:
        raise DomainError("need nonnegative run time and positive interval")
    return exec_time / interval


def interval_for(overhead: float, exec_time: float) -> float:
    if not 0 < overhead <= 1 or exec_time <= 0:
        raise DomainError("overhead must lie in (0, 1] and run time be positive")
    return exec_time / overhead


def log_volume(record_bytes: float, interval: float, duration: float) -> tuple[float, float]:
    """(number of records, total bytes) written over ``duration``."""
    if record_bytes < 0 or interval <= 0 or duration < 0:
        raise DomainError("invalid log volume inputs")
    n = duration / interval
    return n, n * record_bytes


# -- gprof ----------------------------------------------------------------------

@dataclass(frozen=True)
class GprofRow:
    name: str
    pct_time: float | None
    cumulative_s: float | None
    self_s: float | None
    calls: float | None = None
    self_ms_per_call: float | None = None
    total_ms_per_call: float | None = None


@dataclass(frozen=True)
class GprofFlatProfile:
    rows: tuple[GprofRow, ...]
    sample_period: float | None = None

    @property
    def total(self) -> float:
        return math.fsum(r.self_s or 0.0 for r in self.rows)

    @property
    def samples(self) -> float | None:
        return None if self.sample_period is None else self.total / self.sample_period

    def row(self, name: str) -> GprofRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise DomainError(f"no procedure named {name!r}")


_MISSING = re.compile(r"^x+$", re.IGNORECASE)
_PERIOD = re.compile(r"Each sample counts as\s+([\d.,]+)\s+seconds", re.IGNORECASE)


def _cell(tok: str, decimal: Decimal, lineno: int) -> float | None:
    if _MISSING.match(tok):
        return None
    try:
        return parse_number(tok, decimal)
    except ValueError:
        raise ParseError(f"bad number {tok!r}", line=lineno) from None


def parse_gprof(text: str, decimal: Decimal = ".", infer: bool = True) -> GprofFlatProfile:
    """Parse a gprof flat profile; ``x`` marks an unreadable cell.

    With ``infer`` the gaps that follow from the other columns are filled:
    self seconds from the cumulative column, calls from self time over
    self ms/call, and the reverse.
    """
    period = None
    rows: list[GprofRow] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        m = _PERIOD.search(raw)
        if m:
            period = parse_number(m.group(1), decimal)
            continue
        tokens = raw.split()
        if not tokens or not (_numeric(tokens[0], decimal) or _MISSING.match(tokens[0])):
            continue
        if len(tokens) == 7:
            nums = [_cell(t, decimal, lineno) for t in tokens[:6]]
            rows.append(GprofRow(tokens[6], *nums))
        elif len(tokens) == 4:
            nums = [_cell(t, decimal, lineno) for t in tokens[:3]]
            rows.append(GprofRow(tokens[3], *nums))
        else:
            raise ParseError(f"expected 4 or 7 fields, got {len(tokens)}", line=lineno)
    if not rows:
        raise ParseError("no flat-profile rows found")
    profile = GprofFlatProfile(tuple(rows), period)
    return _infer(profile) if infer else profile


def _infer(p: GprofFlatProfile) -> GprofFlatProfile:
    out = []
    prev_cum = 0.0
    for r in p.rows:
        self_s, calls, self_ms = r.self_s, r.calls, r.self_ms_per_call
        if self_s is None and r.cumulative_s is not None:
            self_s = round(r.cumulative_s - prev_cum, 10)
        if calls is None and self_s is not None and self_ms:
            calls = float(round(self_s * 1000.0 / self_ms))
        if self_ms is None and self_s is not None and calls:
            self_ms = self_s * 1000.0 / calls
        cum = r.cumulative_s if r.cumulative_s is not None else prev_cum + (self_s or 0.0)
        out.append(replace(r, self_s=self_s, calls=calls, self_ms_per_call=self_ms,
                           cumulative_s=cum))
        prev_cum = cum
    return GprofFlatProfile(tuple(out), p.sample_period)


@dataclass(frozen=True)
class ScaleProc:
    """Make a procedure ``factor`` times faster."""
    name: str
    factor: float


@dataclass(frozen=True)
class SetCalls:
    name: str
    calls: float


@dataclass(frozen=True)
class SetMsPerCall:
    name: str
    ms: float


ProfileEdit = Union[ScaleProc, SetCalls, SetMsPerCall]


@dataclass(frozen=True)
class GprofWhatIf:
    old_total: float
    new_total: float
    self_seconds: dict[str, float]

    @property
    def speedup(self) -> float:
        return self.old_total / self.new_total


def gprof_what_if(profile: GprofFlatProfile, edits: Iterable[ProfileEdit] = ()) -> GprofWhatIf:
    """Program time after changing procedures' own (self) time."""
    secs = {r.name: r.self_s for r in profile.rows}
    if any(v is None for v in secs.values()):
        raise DomainError("profile has unknown self times")
    for e in edits:
        r = profile.row(e.name)
        if isinstance(e, ScaleProc):
            if e.factor <= 0:
                raise DomainError("speed factor must be positive")
            secs[e.name] = secs[e.name] / e.factor
        elif isinstance(e, SetCalls):
            if r.self_ms_per_call is None:
                raise DomainError(f"{e.name} has no per-call time")
            secs[e.name] = e.calls * r.self_ms_per_call / 1000.0
        elif isinstance(e, SetMsPerCall):
            if r.calls is None:
                raise DomainError(f"{e.name} has no call count")
            secs[e.name] = r.calls * e.ms / 1000.0
        else:
            raise DomainError(f"unknown edit {e!r}")
    return GprofWhatIf(profile.total, math.fsum(secs.values()), secs)


# -- top ----------------------------------------------------------------------------

@dataclass(frozen=True)
class TopSummary:
    load_average: tuple[float, float, float] | None
    cpu: dict[str, float]
    mem_kb: dict[str, float]
    swap_kb: dict[str, float]

    @property
    def mem_used_pct(self) -> float:
        return 100.0 * self.mem_kb["used"] / self.mem_kb["av"]


_KB_FIELD = re.compile(r"(\d+)K\s+(\w+)")


def parse_top_summary(text: str) -> TopSummary:
    """Fields from the header block of classic ``top`` output."""
    load = None
    cpu: dict[str, float] = {}
    mem: dict[str, float] = {}
    swap: dict[str, float] = {}
    for raw in text.splitlines():
        line = raw.strip()
        m = re.search(r"load average:\s*([\d.]+),\s*([\d.]+),\s*([\d.]+)", line)
        if m:
            load = tuple(float(v) for v in m.groups())  # type: ignore[assignment]
        if line.startswith("CPU states:"):
            cpu = {k: float(v) for v, k in re.findall(r"([\d.]+)%\s+(\w+)", line)}
        elif line.startswith("Mem:"):
            mem = {k: float(v) for v, k in _KB_FIELD.findall(line)}
        elif line.startswith("Swap:"):
            swap = {k: float(v) for v, k in _KB_FIELD.findall(line)}
    return TopSummary(load, cpu, mem, swap)


# -- access logs ----------------------------------------------------------------

HTTP_METHODS = frozenset({"GET", "HEAD", "POST", "PUT", "DELETE", "OPTIONS",
                          "TRACE", "CONNECT", "PATCH"})

_CLF = re.compile(
    r'^(?P<ip>\S+)\s+(?:(?P<ident>\S+)\s+(?P<user>\S+)\s+)?'
    r'\[(?P<ts>[^\]]+)\]\s+'
    r'"(?P<method>[A-Z]+)\s+(?P<url>\S+)(?:\s+(?P<proto>[^"\s]+))?"\s+'
    r'(?P<status>\d{3})\s+(?P<bytes>\d+|-)'
    r'(?:\s+"(?P<referer>[^"]*)"\s+"(?P<agent>[^"]*)")?\s*$'
)


@dataclass(frozen=True)
class AccessLogRecord:
    ip: str
    timestamp: datetime
    method: str
    url: str
    protocol: str
    status: int
    bytes: int
    referer: str = ""
    agent: str = ""


@dataclass(frozen=True)
class AccessLog:
    records: tuple[AccessLogRecord, ...]
    rejects: tuple[tuple[int, str], ...]


def _clf_time(s: str) -> datetime:
    stamp, _, tz = s.partition(" ")
    dt = datetime.strptime(stamp, "%d/%b/%Y:%H:%M:%S")
    if tz:
        sign = -1 if tz[0] == "-" else 1
        off = timedelta(hours=int(tz[1:3]), minutes=int(tz[3:5]))
        dt = dt.replace(tzinfo=timezone(sign * off))
    return dt


def parse_access_log(lines: str | Iterable[str]) -> AccessLog:
    """Common/combined log format; the ident and user fields are optional."""
    it = lines.splitlines() if isinstance(lines, str) else lines
    records, rejects = [], []
    for lineno, raw in enumerate(it, 1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        m = _CLF.match(line)
        if not m:
            rejects.append((lineno, "not a log line"))
            continue
        if m["method"] not in HTTP_METHODS:
            rejects.append((lineno, f"unknown method {m['method']}"))
            continue
        try:
            ts = _clf_time(m["ts"])
        except (ValueError, IndexError):
            rejects.append((lineno, f"bad timestamp {m['ts']!r}"))
            continue
        records.append(AccessLogRecord(
            ip=m["ip"], timestamp=ts, method=m["method"], url=m["url"],
            protocol=m["proto"] or "", status=int(m["status"]),
            bytes=0 if m["bytes"] == "-" else int(m["bytes"]),
            referer=m["referer"] or "", agent=m["agent"] or "",
        ))
    return AccessLog(tuple(records), tuple(rejects))


def filter_records(records: Iterable[AccessLogRecord], methods: Iterable[str] = ("GET",),
                   statuses: Iterable[int] | None = None) -> list[AccessLogRecord]:
    ms = set(methods)
    ss = None if statuses is None else set(statuses)
    return [r for r in records if r.method in ms and (ss is None or r.status in ss)]


@dataclass(frozen=True)
class SizeGroup:
    label: str
    lo: float
    hi: float
    count: int
    mean_size: float


def classify_by_size(records: Iterable[AccessLogRecord], edges: Sequence[float],
                     labels: Sequence[str] | None = None) -> list[SizeGroup]:
    """Bucket records by response size into [edges[i], edges[i+1])."""
    e = list(edges)
    if len(e) < 2 or any(b <= a for a, b in zip(e, e[1:])):
        raise DomainError("bin edges must be strictly increasing, at least two")
    names = list(labels) if labels is not None else [f"[{a:g},{b:g})" for a, b in zip(e, e[1:])]
    if len(names) != len(e) - 1:
        raise DomainError("one label per bin is required")
    sums = [0.0] * len(names)
    counts = [0] * len(names)
    for r in records:
        if not e[0] <= r.bytes < e[-1]:
            raise DomainError(f"size {r.bytes} falls outside the bins")
        i = next(k for k in range(len(names)) if r.bytes < e[k + 1])
        sums[i] += r.bytes
        counts[i] += 1
    return [SizeGroup(n, a, b, c, s / c if c else 0.0)
            for n, a, b, c, s in zip(names, e, e[1:], counts, sums)]


@dataclass(frozen=True)
class WorkloadClass:
    name: str
    count: float
    share_pct: float
    rate: float  # arrivals per second

    @property
    def per_minute(self) -> float:
        return 60.0 * self.rate

    @property
    def interarrival(self) -> float:
        return math.inf if self.rate == 0 else 1.0 / self.rate


def build_workload_model(groups: Iterable[SizeGroup | tuple[str, float]], T: float
                         ) -> list[WorkloadClass]:
    """Arrival rate, share and mean interarrival time per class over ``T`` seconds."""
    if not T > 0:
        raise DomainError("observation period must be positive")
    pairs = [(g.label, float(g.count)) if isinstance(g, SizeGroup) else (g[0], float(g[1]))
             for g in groups]
    total = math.fsum(c for _, c in pairs)
    if total <= 0 or any(c < 0 for _, c in pairs):
        raise DomainError("class counts must be nonnegative with a positive total")
    return [WorkloadClass(n, c, 100.0 * c / total, c / T) for n, c in pairs]


def workload_open_model(classes: Sequence[WorkloadClass],
                        demands: Mapping[str, Sequence[float]]) -> OpenModel:
    """Collapse per-class demands into one open class.

    ``demands`` maps a device to one demand per class; the device demand of
    the aggregate is the arrival-weighted mean, so utilizations are kept.
    """
    lam = math.fsum(c.rate for c in classes)
    if lam <= 0:
        raise DomainError("no arrivals")
    stations = []
    for dev, per_class in demands.items():
        if len(per_class) != len(classes):
            raise DomainError(f"device {dev!r} needs one demand per class")
        d = math.fsum(c.rate * x for c, x in zip(classes, per_class)) / lam
        stations.append(Station(dev, 1.0, d))
    return OpenModel(lam, tuple(stations))


def workload_model_file(classes: Sequence[WorkloadClass],
                        demands: Mapping[str, Sequence[float]]) -> str:
    """The aggregate open model in the plain-text format read by ``parse_model``."""
    return format_model(workload_open_model(classes, demands))


_AGENTS = ("Mozilla/4.0", "Mozilla/5.0", "Opera/6.0")


def synthetic_access_log(n: int, seed: int,
                         mixture: Sequence[tuple[float, float, float]],
                         start: datetime = datetime(2002, 2, 16, 0, 0, 0,
                                                    tzinfo=timezone(timedelta(hours=1))),
                         duration: float = 86400.0, non_get: float = 0.02
                         ) -> tuple[list[str], list[int]]:
    """Combined-format log lines drawn from a lognormal size mixture.

    ``mixture`` holds (weight, median bytes, sigma of log size) per component.
    Returns the lines and the mixture component behind each one. A share
    ``non_get`` of the lines uses other methods. Timestamps are sorted and
    spread uniformly over ``duration`` seconds.
    """
    if n < 0 or duration <= 0 or not mixture:
        raise DomainError("need n >= 0, a positive duration and a mixture")
    rng = random.Random(seed)
    weights = [w for w, _, _ in mixture]
    offsets = sorted(rng.uniform(0.0, duration) for _ in range(n))
    lines, comps = [], []
    for off in offsets:
        c = rng.choices(range(len(mixture)), weights)[0]
        _, median, sigma = mixture[c]
        size = max(1, int(rng.lognormvariate(math.log(median), sigma)))
        method = "GET" if rng.random() >= non_get else rng.choice(("POST", "HEAD"))
        ts = (start + timedelta(seconds=off)).strftime("%d/%b/%Y:%H:%M:%S %z")
        ip = ".".join(str(rng.randint(1, 254)) for _ in range(4))
        lines.append(f'{ip} - - [{ts}] "{method} /doc{c}/{rng.randint(0, 999)}.html HTTP/1.1" '
                     f'200 {size} "-" "{rng.choice(_AGENTS)}"')
        comps.append(c)
    return lines, comps
