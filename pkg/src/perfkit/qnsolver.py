"""Single-class product-form queueing networks.

Open networks are solved directly, closed ones by exact mean value analysis.
The module also provides asymptotic and balanced bounds, model edits for
what-if studies and a small Ethernet transfer sub-model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Literal, Sequence, Union

from perfkit.errors import DomainError, ParseError, SaturationError

__all__ = [
    "Station",
    "OpenModel",
    "ClosedModel",
    "StationResult",
    "MvaRow",
    "SolvedNetwork",
    "Bottleneck",
    "AsymptoticBounds",
    "OpenBounds",
    "BalancedBounds",
    "ScaleService",
    "SetService",
    "SetVisits",
    "SplitStation",
    "AddStation",
    "EthernetDemand",
    "solve_open",
    "solve_mva",
    "bottleneck",
    "asymptotic_bounds",
    "open_bounds",
    "balanced_bounds",
    "what_if",
    "ethernet_transfer_demand",
    "csma_collision_overhead",
    "parse_model",
    "format_model",
]

Kind = Literal["queueing", "delay"]


@dataclass(frozen=True)
class Station:
    name: str
    V: float
    S: float
    kind: Kind = "queueing"
    think_surrogate: bool = False  # delay station standing in for user think time

    def __post_init__(self) -> None:
        if self.kind not in ("queueing", "delay"):
            raise DomainError(f"unknown station kind {self.kind!r}")
        if not (self.V >= 0 and self.S >= 0) or not math.isfinite(self.V * self.S):
            raise DomainError(f"station {self.name!r} needs finite V >= 0 and S >= 0")
        if self.think_surrogate and self.kind != "delay":
            raise DomainError("only delay stations can stand in for think time")

    @property
    def D(self) -> float:
        return self.V * self.S


@dataclass(frozen=True)
class OpenModel:
    lam: float
    stations: tuple[Station, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "stations", tuple(self.stations))
        if not self.lam >= 0:
            raise DomainError("arrival rate must be nonnegative")
        if not self.stations:
            raise DomainError("model has no stations")


@dataclass(frozen=True)
class ClosedModel:
    N: int
    Z: float
    stations: tuple[Station, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "stations", tuple(self.stations))
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 0:
            raise DomainError("population must be a nonnegative integer")
        object.__setattr__(self, "N", int(self.N))
        if not self.Z >= 0:
            raise DomainError("think time must be nonnegative")
        if not self.stations:
            raise DomainError("model has no stations")


Model = Union[OpenModel, ClosedModel]


@dataclass(frozen=True)
class StationResult:
    name: str
    V: float
    S: float
    D: float
    U: float
    N: float
    R: float
    X: float


@dataclass(frozen=True)
class MvaRow:
    n: int
    R_i: tuple[float, ...]
    R: float
    X0: float
    N_i: tuple[float, ...]


@dataclass(frozen=True)
class Bottleneck:
    indices: tuple[int, ...]
    D_b: float

    @property
    def index(self) -> int:
        return self.indices[0]


@dataclass(frozen=True)
class SolvedNetwork:
    stations: tuple[StationResult, ...]
    X0: float
    R: float | None  # None for an empty closed population
    N: float
    D: float
    bottleneck: Bottleneck
    X_max: float
    Z: float = 0.0
    N_star: int | None = None
    N_star_real: float | None = None
    trace: tuple[MvaRow, ...] = field(default=(), repr=False)

    def little_gap(self) -> float:
        """Absolute violation of Little's law for the whole system."""
        if self.R is None:
            return abs(self.N)
        return abs(self.N - self.X0 * (self.R + self.Z))


def _bottleneck(stations: Sequence[Station]) -> Bottleneck:
    cands = [(i, s.D) for i, s in enumerate(stations) if not s.think_surrogate]
    if not cands:
        raise DomainError("no bottleneck candidates")
    d_b = max(d for _, d in cands)
    ties = tuple(i for i, d in cands if math.isclose(d, d_b, rel_tol=1e-12, abs_tol=1e-15))
    return Bottleneck(ties, d_b)


def bottleneck(stations: Sequence[Station]) -> Bottleneck:
    """Station(s) with the largest demand; ties are all reported."""
    if not stations:
        raise DomainError("no stations")
    return _bottleneck(stations)


def _ceil(x: float) -> int:
    # guard against 3.0000000001 turning into 4
    return math.ceil(x - 1e-9)


def solve_open(model: OpenModel) -> SolvedNetwork:
    st = model.stations
    lam = model.lam
    b = _bottleneck(st)
    # delay stations never saturate, so only queueing demand caps the arrival rate
    queueing = [(s.D, i) for i, s in enumerate(st) if s.kind == "queueing"]
    d_sat, i_sat = max(queueing, default=(0.0, b.index))
    x_max = math.inf if d_sat == 0 else 1.0 / d_sat
    if lam * d_sat >= 1.0:
        raise SaturationError(
            f"arrival rate {lam} saturates station {st[i_sat].name!r}; "
            f"maximum throughput is {x_max:.6g}",
            bottleneck=i_sat, x_max=x_max,
        )
    results = []
    for s in st:
        U = lam * s.D
        R_i = s.S if s.kind == "delay" else s.S / (1.0 - U)
        X_i = lam * s.V
        results.append(StationResult(s.name, s.V, s.S, s.D, U, X_i * R_i, R_i, X_i))
    R = math.fsum(r.V * r.R for r in results)
    return SolvedNetwork(
        stations=tuple(results), X0=lam, R=R, N=lam * R,
        D=math.fsum(s.D for s in st), bottleneck=b, X_max=x_max,
    )


def solve_mva(model: ClosedModel, keep_trace: bool = True) -> SolvedNetwork:
    st = model.stations
    K = len(st)
    D = math.fsum(s.D for s in st)
    b = _bottleneck(st)
    x_max = math.inf if b.D_b == 0 else 1.0 / b.D_b
    n_star_real = None if b.D_b == 0 else (D + model.Z) / b.D_b
    n_star = None if n_star_real is None else _ceil(n_star_real)

    Nq = [0.0] * K
    R_i = [0.0] * K
    X0 = 0.0
    R: float | None = None
    trace = []
    for n in range(1, model.N + 1):
        R_i = [s.S if s.kind == "delay" else s.S * (Nq[i] + 1.0) for i, s in enumerate(st)]
        R = math.fsum(s.V * r for s, r in zip(st, R_i))
        denom = R + model.Z
        if denom <= 0:
            raise DomainError("zero total demand and think time: throughput is unbounded")
        X0 = n / denom
        Nq = [X0 * s.V * r for s, r in zip(st, R_i)]
        if keep_trace:
            trace.append(MvaRow(n, tuple(R_i), R, X0, tuple(Nq)))

    results = tuple(
        StationResult(s.name, s.V, s.S, s.D, X0 * s.D, Nq[i], R_i[i], X0 * s.V)
        for i, s in enumerate(st)
    )
    return SolvedNetwork(
        stations=results, X0=X0, R=R, N=math.fsum(Nq), D=D, bottleneck=b, X_max=x_max,
        Z=model.Z, N_star=n_star, N_star_real=n_star_real, trace=tuple(trace),
    )


@dataclass(frozen=True)
class AsymptoticBounds:
    D: float
    D_b: float
    Z: float

    @property
    def unbounded(self) -> bool:
        return self.D_b == 0

    @property
    def N_star_real(self) -> float | None:
        return None if self.unbounded else (self.D + self.Z) / self.D_b

    @property
    def N_star(self) -> int | None:
        x = self.N_star_real
        return None if x is None else _ceil(x)

    def r_opt(self, N: float) -> float:
        return max(self.D, N * self.D_b - self.Z)

    def x_opt(self, N: float) -> float:
        cap = math.inf if self.unbounded else 1.0 / self.D_b
        if self.D + self.Z == 0:
            return cap
        return min(N / (self.D + self.Z), cap)


def asymptotic_bounds(model: ClosedModel) -> AsymptoticBounds:
    return AsymptoticBounds(
        D=math.fsum(s.D for s in model.stations),
        D_b=_bottleneck(model.stations).D_b,
        Z=model.Z,
    )


@dataclass(frozen=True)
class OpenBounds:
    R_opt: float
    X_opt: float


def open_bounds(stations: Sequence[Station] | Sequence[float]) -> OpenBounds:
    """Minimum response time and saturating arrival rate of an open model.

    Accepts stations or bare demands.
    """
    demands = [s.D if isinstance(s, Station) else float(s) for s in stations]
    if not demands or any(d < 0 for d in demands):
        raise DomainError("need a non-empty list of nonnegative demands")
    d_b = max(demands)
    return OpenBounds(math.fsum(demands), math.inf if d_b == 0 else 1.0 / d_b)


@dataclass(frozen=True)
class BalancedBounds:
    """Balanced job bounds; D_avg is the total demand over the number of devices."""

    D: float
    D_max: float
    D_avg: float
    Z: float

    def r_lower(self, N: int) -> float:
        return max(N * self.D_max - self.Z,
                   self.D + (N - 1) * self.D_avg * self.D / (self.D + self.Z))

    def r_upper(self, N: int) -> float:
        return self.D + (N - 1) * self.D_max * N * self.D / (N * self.D + self.Z)

    def x_lower(self, N: int) -> float:
        return N / (self.Z + self.r_upper(N))

    def x_upper(self, N: int) -> float:
        balanced = N / (self.Z + self.D + (N - 1) * self.D_avg * self.D / (self.D + self.Z))
        return min(1.0 / self.D_max, balanced)


def balanced_bounds(model: ClosedModel) -> BalancedBounds:
    devices = [s for s in model.stations if s.kind == "queueing"]
    if len(devices) != len(model.stations):
        raise DomainError("balanced bounds need single-server queueing stations only")
    D = math.fsum(s.D for s in devices)
    if D <= 0:
        raise DomainError("total demand must be positive")
    return BalancedBounds(D=D, D_max=max(s.D for s in devices), D_avg=D / len(devices), Z=model.Z)


# -- what-if edits -----------------------------------------------------------

StationRef = Union[int, str]


@dataclass(frozen=True)
class ScaleService:
    """Multiply a station's service time; 0.5 models a device twice as fast."""
    station: StationRef
    factor: float


@dataclass(frozen=True)
class SetService:
    station: StationRef
    S: float


@dataclass(frozen=True)
class SetVisits:
    station: StationRef
    V: float


@dataclass(frozen=True)
class SplitStation:
    """Replace a station by ``parts`` copies sharing its visits evenly."""
    station: StationRef
    parts: int
    S: float | None = None


@dataclass(frozen=True)
class AddStation:
    station: Station


Edit = Union[ScaleService, SetService, SetVisits, SplitStation, AddStation]


def _locate(stations: Sequence[Station], ref: StationRef) -> int:
    if isinstance(ref, int):
        if not 0 <= ref < len(stations):
            raise DomainError(f"station index {ref} out of range")
        return ref
    for i, s in enumerate(stations):
        if s.name == ref:
            return i
    raise DomainError(f"no station named {ref!r}")


def _apply(stations: list[Station], edit: Edit) -> list[Station]:
    if isinstance(edit, AddStation):
        return stations + [edit.station]
    i = _locate(stations, edit.station)
    s = stations[i]
    if isinstance(edit, ScaleService):
        if not edit.factor > 0:
            raise DomainError("scale factor must be positive")
        stations[i] = replace(s, S=s.S * edit.factor)
    elif isinstance(edit, SetService):
        stations[i] = replace(s, S=edit.S)
    elif isinstance(edit, SetVisits):
        stations[i] = replace(s, V=edit.V)
    elif isinstance(edit, SplitStation):
        if edit.parts < 1:
            raise DomainError("a station splits into at least one part")
        S = s.S if edit.S is None else edit.S
        copies = [replace(s, name=f"{s.name}.{j + 1}", V=s.V / edit.parts, S=S)
                  for j in range(edit.parts)]
        stations[i:i + 1] = copies
    else:
        raise DomainError(f"unknown edit {edit!r}")
    return stations


def what_if(model: Model, edits: Iterable[Edit]) -> Model:
    """Apply edits in order and return a new model; the input is not touched."""
    stations = list(model.stations)
    for e in edits:
        stations = _apply(stations, e)
    return replace(model, stations=tuple(stations))


# -- Ethernet sub-model ------------------------------------------------------

@dataclass(frozen=True)
class EthernetDemand:
    request_frames: int
    response_frames: int
    total_bytes: int
    demand: float  # seconds


def ethernet_transfer_demand(request_bytes: int, response_bytes: int, *, mtu: int = 1500,
                             frame_overhead: int = 18, tcp: int = 20, ip: int = 20,
                             bandwidth: float = 100e6) -> EthernetDemand:
    """Bytes on the wire and transfer time for one request/response pair.

    Each direction carries one TCP and one IP header. The request pays the
    link-layer overhead on every frame; the response pays it per frame only
    once it has to be fragmented. ``bandwidth`` is in bits per second.
    """
    if request_bytes < 0 or response_bytes < 0 or mtu <= 0 or not bandwidth > 0:
        raise DomainError("sizes must be nonnegative and mtu, bandwidth positive")
    req_frames = max(1, math.ceil(request_bytes / mtu))
    resp_frames = max(1, math.ceil(response_bytes / mtu))
    total = (request_bytes + tcp + ip + req_frames * frame_overhead
             + response_bytes + tcp + ip
             + (resp_frames * frame_overhead if resp_frames > 1 else 0))
    return EthernetDemand(req_frames, resp_frames, total, total * 8 / bandwidth)


def csma_collision_overhead(frames: int, k: int, slot: float = 5.12e-6) -> float:
    """Extra delay from collisions with ``k`` contending frames."""
    if k < 1:
        raise DomainError("need at least one contending station")
    if frames < 0 or slot < 0:
        raise DomainError("frames and slot must be nonnegative")
    if k == 1:
        return 0.0
    a = math.exp((k - 1) * math.log1p(-1.0 / k))
    return frames * slot * (1.0 - a) / a


# -- plain-text model files ---------------------------------------------------

def parse_model(text: str) -> Model:
    """Read ``open <lambda>`` or ``closed <N> <Z>`` then ``name kind V S`` lines.

    Blank lines and ``#`` comments are ignored; commas may separate fields.
    """
    head: list[str] | None = None
    head_line = 0
    stations = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        parts = line.split()
        if head is None:
            head, head_line = parts, lineno
            continue
        if len(parts) != 4:
            raise ParseError("expected 'name kind V S'", line=lineno)
        name, kind, v, s = parts
        try:
            stations.append(Station(name, float(v), float(s), kind=kind))  # type: ignore[arg-type]
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    if head is None:
        raise ParseError("empty model file")
    try:
        if head[0] == "open" and len(head) == 2:
            return OpenModel(float(head[1]), tuple(stations))
        if head[0] == "closed" and len(head) == 3:
            return ClosedModel(int(head[1]), float(head[2]), tuple(stations))
    except ValueError as exc:
        raise ParseError(str(exc), line=head_line) from None
    raise ParseError("header must be 'open LAMBDA' or 'closed N Z'", line=head_line)


def format_model(model: Model, fmt: Callable[[float], str] = repr) -> str:
    if isinstance(model, OpenModel):
        lines = [f"open {fmt(model.lam)}"]
    else:
        lines = [f"closed {model.N} {fmt(model.Z)}"]
    lines += [f"{s.name} {s.kind} {fmt(s.V)} {fmt(s.S)}" for s in model.stations]
    return "\n".join(lines) + "\n"
