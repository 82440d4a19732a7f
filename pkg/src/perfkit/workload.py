"""Workload characterization.

Parameter scaling and distances, agglomerative clustering over centroids,
cluster quality, model representativeness, customer behaviour graphs,
per-device demand aggregation and Zipf popularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from itertools import combinations
from typing import Literal, Mapping, Sequence

import numpy as np

from perfkit.errors import DomainError, ParseError
from perfkit.opanalysis import solve_linear

__all__ = [
    "ScalingSpec",
    "Merge",
    "Dendrogram",
    "RepresentativenessSpec",
    "CBMG",
    "CsidResult",
    "round_half_up",
    "scale",
    "distance",
    "drop_outliers",
    "sample_rows",
    "mst_cluster",
    "beta_cv",
    "representativeness",
    "most_representative",
    "cbmg_visit_rates",
    "session_length",
    "parse_cbmg_csv",
    "cvm_cluster",
    "csid_demands",
    "zipf",
    "zipf_share",
]

ScaleKind = Literal["zscore", "weights", "range", "percentile", "log"]
Metric = Literal["euclidean", "weighted", "chi2"]
CentroidRule = Literal["midpoint", "mean"]


def round_half_up(x, decimals: int):
    """Round like a hand calculation (0.125 -> 0.13), elementwise for arrays."""
    q = Decimal(1).scaleb(-decimals)

    def one(v: float) -> float:
        return float(Decimal(repr(float(v))).quantize(q, rounding=ROUND_HALF_UP))

    if np.ndim(x) == 0:
        return one(x)
    return np.vectorize(one, otypes=[float])(np.asarray(x, dtype=float))


# -- scaling --------------------------------------------------------------

@dataclass(frozen=True)
class ScalingSpec:
    """How to rescale each column of a dataset.

    Constants left as None are estimated from the data: column mean and
    sample standard deviation for ``zscore``, column extremes for ``range``.
    """

    kind: ScaleKind
    weights: Sequence[float] | None = None
    center: Sequence[float] | float | None = None
    spread: Sequence[float] | float | None = None
    lo: Sequence[float] | float | None = None
    hi: Sequence[float] | float | None = None
    percentiles: tuple[float, float] = (2.5, 97.5)

    def __post_init__(self) -> None:
        if self.kind not in ("zscore", "weights", "range", "percentile", "log"):
            raise DomainError(f"unknown scaling kind {self.kind!r}")
        if self.kind == "weights" and self.weights is None:
            raise DomainError("weight scaling needs weights")
        a, b = self.percentiles
        if not 0 <= a < b <= 100:
            raise DomainError("percentile bounds must satisfy 0 <= low < high <= 100")


def _matrix(values) -> np.ndarray:
    x = np.asarray(values, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] == 0:
        raise DomainError("dataset must be a non-empty 2-D table")
    return x


def scale(values, spec: ScalingSpec) -> np.ndarray:
    """Rescale the columns of ``values`` (rows are components)."""
    x = _matrix(values)
    if spec.kind == "zscore":
        mu = x.mean(axis=0) if spec.center is None else np.broadcast_to(spec.center, x.shape[1])
        if spec.spread is None:
            if x.shape[0] < 2:
                raise DomainError("z-scores need at least two rows")
            sd = x.std(axis=0, ddof=1)
        else:
            sd = np.broadcast_to(np.asarray(spec.spread, dtype=float), x.shape[1])
        if np.any(sd <= 0):
            raise DomainError("zero-variance column cannot be z-scored")
        return (x - mu) / sd
    if spec.kind == "weights":
        w = np.asarray(spec.weights, dtype=float)
        if w.shape != (x.shape[1],):
            raise DomainError("one weight per column is required")
        return x * w
    if spec.kind == "log":
        if np.any(x <= 0):
            raise DomainError("log scaling needs strictly positive values")
        return np.log10(x)
    if spec.kind == "range":
        lo = x.min(axis=0) if spec.lo is None else np.broadcast_to(spec.lo, x.shape[1])
        hi = x.max(axis=0) if spec.hi is None else np.broadcast_to(spec.hi, x.shape[1])
    else:
        lo, hi = np.percentile(x, spec.percentiles, axis=0)
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    if np.any(hi <= lo):
        raise DomainError("scaling bounds must be strictly ordered")
    return (x - lo) / (hi - lo)


def distance(a, b, metric: Metric = "euclidean", weights=None) -> float:
    """Distance between two parameter vectors.

    ``chi2`` divides by the entries of ``a`` and is therefore not symmetric.
    """
    u, v = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if u.shape != v.shape:
        raise DomainError("components differ in dimension")
    diff2 = (u - v) ** 2
    if metric == "euclidean":
        return float(math.sqrt(diff2.sum()))
    if metric == "weighted":
        w = np.ones_like(u) if weights is None else np.asarray(weights, dtype=float)
        if w.shape != u.shape or np.any(w < 0):
            raise DomainError("weights must be nonnegative, one per parameter")
        return float(math.sqrt(np.dot(w, diff2)))
    if metric == "chi2":
        if np.any(u == 0):
            raise DomainError("chi-square distance needs nonzero entries in the first vector")
        return float((diff2 / u).sum())
    raise DomainError(f"unknown metric {metric!r}")


def drop_outliers(values, threshold: float = 3.0) -> np.ndarray:
    """Boolean mask of rows whose every |z-score| is within ``threshold``."""
    x = _matrix(values)
    sd = x.std(axis=0, ddof=1) if x.shape[0] > 1 else np.zeros(x.shape[1])
    z = np.divide(x - x.mean(axis=0), sd, out=np.zeros_like(x), where=sd > 0)
    return np.all(np.abs(z) <= threshold, axis=1)


def sample_rows(values, n: int, seed: int) -> np.ndarray:
    """Indices of ``n`` rows drawn uniformly without replacement."""
    x = _matrix(values)
    if not 0 <= n <= x.shape[0]:
        raise DomainError("sample size out of range")
    return np.sort(np.random.default_rng(seed).choice(x.shape[0], size=n, replace=False))


# -- agglomerative clustering -----------------------------------------------

@dataclass(frozen=True)
class Merge:
    left: tuple[int, ...]
    right: tuple[int, ...]
    distance: float
    centroid: tuple[float, ...]

    @property
    def members(self) -> tuple[int, ...]:
        return self.left + self.right


@dataclass(frozen=True)
class Dendrogram:
    labels: tuple[str, ...]
    points: np.ndarray = field(repr=False)
    merges: tuple[Merge, ...]

    def label(self, members: Sequence[int]) -> str:
        return "".join(self.labels[i] for i in members)

    def cut(self, k: int | None = None, height: float | None = None
            ) -> list[tuple[tuple[int, ...], np.ndarray]]:
        """Clusters (members, centroid) after replaying merges.

        Stops once ``k`` clusters remain or before the first merge above ``height``.
        """
        n = len(self.labels)
        if k is not None and not 1 <= k <= n:
            raise DomainError(f"cannot cut {n} components into {k} clusters")
        clusters = {(i,): self.points[i] for i in range(n)}
        for m in self.merges:
            if k is not None and len(clusters) <= k:
                break
            if height is not None and m.distance > height:
                break
            del clusters[m.left], clusters[m.right]
            clusters[m.members] = np.asarray(m.centroid)
        return sorted(clusters.items(), key=lambda kv: min(kv[0]))

    def to_text(self, digits: int = 2) -> str:
        out = []
        for m in self.merges:
            c = ", ".join(f"{v:.{digits}f}" for v in m.centroid)
            out.append(f"{self.label(m.left)} + {self.label(m.right)} "
                       f"at {m.distance:.{digits}f} -> ({c})")
        return "\n".join(out) + ("\n" if out else "")

    def gnuplot_coords(self) -> str:
        """Line segments for plotting: blank-line separated x/height pairs."""
        order: list[int] = []
        groups = {(i,): [i] for i in range(len(self.labels))}
        for m in self.merges:
            groups[m.members] = groups.pop(m.left) + groups.pop(m.right)
        for g in groups.values():
            order.extend(g)
        x = {(i,): float(order.index(i)) for i in range(len(self.labels))}
        h = {(i,): 0.0 for i in range(len(self.labels))}
        blocks = []
        for m in self.merges:
            xl, xr = x[m.left], x[m.right]
            blocks.append(f"{xl:g} {h[m.left]:g}\n{xl:g} {m.distance:g}\n"
                          f"{xr:g} {m.distance:g}\n{xr:g} {h[m.right]:g}\n")
            x[m.members] = (xl + xr) / 2.0
            h[m.members] = m.distance
        return "\n".join(blocks)


def mst_cluster(components, labels: Sequence[str] | None = None, *,
                metric: Metric = "euclidean", weights=None,
                k: int | None = None, max_distance: float | None = None,
                centroid: CentroidRule = "midpoint", decimals: int | None = None,
                tol: float = 1e-12) -> Dendrogram:
    """Repeatedly merge the two closest clusters, measured between centroids.

    With ``centroid="midpoint"`` a merged cluster sits halfway between the
    two centroids it replaces, which is how the computation is done by hand;
    ``"mean"`` uses the mean of all member points. ``decimals`` rounds the
    inputs and every new centroid half-up, again to mirror hand arithmetic.
    Pairs tied at the minimum distance are merged in the same step when
    disjoint, lowest labels first.
    """
    pts = _matrix(components)
    if decimals is not None:
        pts = round_half_up(pts, decimals)
    n = pts.shape[0]
    names = tuple(labels) if labels is not None else tuple(str(i + 1) for i in range(n))
    if len(names) != n:
        raise DomainError("one label per component is required")
    if centroid not in ("midpoint", "mean"):
        raise DomainError(f"unknown centroid rule {centroid!r}")

    active: list[tuple[tuple[int, ...], np.ndarray]] = [((i,), pts[i]) for i in range(n)]
    merges: list[Merge] = []

    def dist(a: np.ndarray, b: np.ndarray) -> float:
        d = distance(a, b, metric, weights)
        return d if metric != "chi2" else min(d, distance(b, a, metric, weights))

    while len(active) > 1 and (k is None or len(active) > k):
        pairs = [(dist(active[i][1], active[j][1]), i, j)
                 for i, j in combinations(range(len(active)), 2)]
        d_min = min(p[0] for p in pairs)
        if max_distance is not None and d_min > max_distance:
            break
        tied = sorted((min(active[i][0]), min(active[j][0]), i, j)
                      for d, i, j in pairs if d - d_min <= tol * max(1.0, d_min))
        used: set[int] = set()
        step = []
        for _, _, i, j in tied:
            if i in used or j in used:
                continue
            if k is not None and len(active) - len(step) <= k:
                break
            used.update((i, j))
            step.append((i, j))
        new = []
        for i, j in step:
            (ma, ca), (mb, cb) = active[i], active[j]
            members = ma + mb
            c = (ca + cb) / 2.0 if centroid == "midpoint" else pts[list(members)].mean(axis=0)
            if decimals is not None:
                c = round_half_up(c, decimals)
            merges.append(Merge(ma, mb, d_min, tuple(float(v) for v in c)))
            new.append((members, c))
        active = [a for idx, a in enumerate(active) if idx not in used] + new
    return Dendrogram(names, pts, tuple(merges))


def beta_cv(points, clusters: Sequence[tuple[Sequence[int], Sequence[float]]]) -> float:
    """Intra-cluster over inter-cluster coefficient of variation.

    Intra uses every member-to-centroid distance, inter every pairwise
    centroid distance. Returns inf when the inter-cluster CV is zero (for
    example with exactly two clusters) while the intra-cluster CV is not.
    """
    x = _matrix(points)
    if len(clusters) < 2:
        raise DomainError("need at least two clusters")
    intra = np.array([distance(x[i], c) for members, c in clusters for i in members])
    inter = np.array([distance(a[1], b[1]) for a, b in combinations(clusters, 2)])

    def cv(d: np.ndarray) -> float:
        m = d.mean()
        return 0.0 if m == 0 else float(d.std() / m)

    ci, ce = cv(intra), cv(inter)
    if ci == 0:
        return 0.0
    return math.inf if ce == 0 else ci / ce


# -- representativeness -------------------------------------------------------

@dataclass(frozen=True)
class RepresentativenessSpec:
    shares: tuple[float, ...]
    weights: tuple[float, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self) -> None:
        for name in ("shares", "weights", "lo", "hi"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if not math.isclose(math.fsum(self.shares), 1.0, abs_tol=1e-9) or min(self.shares) < 0:
            raise DomainError("class shares must be nonnegative and sum to 1")
        if min(self.weights) < 0:
            raise DomainError("parameter weights must be nonnegative")
        if not (len(self.weights) == len(self.lo) == len(self.hi)):
            raise DomainError("weights and ranges must cover the same parameters")
        if any(h <= l for l, h in zip(self.lo, self.hi)):
            raise DomainError("every parameter range needs max > min")


def representativeness(model, real, spec: RepresentativenessSpec) -> float:
    """Weighted distance between range-normalized model and real workloads.

    ``model`` and ``real`` are (classes x parameters) tables of class means.
    """
    m, r = np.asarray(model, dtype=float), np.asarray(real, dtype=float)
    if m.ndim == 1:
        m, r = m[None, :], r[None, :]
    shape = (len(spec.shares), len(spec.weights))
    if m.shape != shape or r.shape != shape:
        raise DomainError(f"tables must be {shape[0]} classes x {shape[1]} parameters")
    lo, hi = np.array(spec.lo), np.array(spec.hi)
    nm, nr = (m - lo) / (hi - lo), (r - lo) / (hi - lo)
    return float(np.dot(spec.shares, np.abs(nm - nr) @ np.array(spec.weights)))


def most_representative(models: Mapping[str, object], real,
                        spec: RepresentativenessSpec) -> str:
    scores = {name: representativeness(m, real, spec) for name, m in models.items()}
    return min(scores, key=scores.__getitem__)


# -- behaviour graphs -------------------------------------------------------------

@dataclass(frozen=True)
class CBMG:
    """Absorbing navigation chain: state 0 is the entry, the last state the exit."""

    p: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        p = np.array(self.p, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 2:
            raise DomainError("transition matrix must be square with at least two states")
        if np.any(p < 0) or np.any(p > 1 + 1e-12):
            raise DomainError("probabilities must lie in [0, 1]")
        if not np.allclose(p[:-1].sum(axis=1), 1.0, atol=1e-9):
            raise DomainError("every non-exit row must sum to 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        names = tuple(self.names) or tuple(f"s{i + 1}" for i in range(p.shape[0]))
        if len(names) != p.shape[0]:
            raise DomainError("one name per state is required")
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.p.shape[0]


def cbmg_visit_rates(model: CBMG) -> np.ndarray:
    """Mean visits per session to every non-exit state (entry has 1)."""
    q = model.p[:-1, :-1]
    e = np.zeros(model.n - 1)
    e[0] = 1.0
    return solve_linear(np.eye(model.n - 1) - q.T, e)


def session_length(model: CBMG) -> float:
    """Expected number of requests per session, entry excluded."""
    return float(cbmg_visit_rates(model)[1:].sum())


def parse_cbmg_csv(text: str) -> CBMG:
    """Rows ``from,to,probability`` by state name; the first row's source is
    the entry and the name ``exit`` (or the last new name) is absorbing."""
    edges = []
    order: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.lower().startswith("from,"):
            continue
        parts = [s.strip() for s in line.split(",")]
        if len(parts) != 3:
            raise ParseError("expected 'from,to,probability'", line=lineno)
        try:
            prob = float(parts[2])
        except ValueError:
            raise ParseError(f"bad probability {parts[2]!r}", line=lineno) from None
        edges.append((parts[0], parts[1], prob))
        for s in parts[:2]:
            if s not in order:
                order.append(s)
    if not edges:
        raise ParseError("no transitions found")
    if "exit" in order:
        order.remove("exit")
        order.append("exit")
    idx = {s: i for i, s in enumerate(order)}
    p = np.zeros((len(order), len(order)))
    for a, b, prob in edges:
        p[idx[a], idx[b]] += prob
    return CBMG(p, tuple(order))


def cvm_cluster(sessions, k: int, labels: Sequence[str] | None = None,
                **kwargs) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """Group sessions by Euclidean distance between their visit-rate vectors."""
    return mst_cluster(sessions, labels, k=k, **kwargs).cut(k=k)


@dataclass(frozen=True)
class CsidResult:
    request_rate: float
    demands: dict[str, float]
    utilizations: dict[str, float]


def csid_demands(visits: float, services: Mapping[str, float], lam: float,
                 convention: Literal["per_request", "per_session"] = "per_request"
                 ) -> CsidResult:
    """Per-device demand of one function invoked ``visits`` times per session.

    ``per_request`` charges each device D * (lam * visits), the arithmetic
    used for tabulated case studies; ``per_session`` applies the plain
    utilization law U = lam * D.
    """
    if visits < 0 or lam < 0 or any(s < 0 for s in services.values()):
        raise DomainError("inputs must be nonnegative")
    if convention not in ("per_request", "per_session"):
        raise DomainError(f"unknown convention {convention!r}")
    rate = lam * visits
    demands = {dev: visits * s for dev, s in services.items()}
    mult = rate if convention == "per_request" else lam
    return CsidResult(rate, demands, {dev: d * mult for dev, d in demands.items()})


def zipf(k: float, r: int) -> float:
    if r < 1:
        raise DomainError("rank starts at 1")
    return k / r


def zipf_share(r: int, m: int) -> float:
    """Share of references going to rank ``r`` among the top ``m`` items."""
    if not 1 <= r <= m:
        raise DomainError("rank must lie in [1, m]")
    return (1.0 / r) / math.fsum(1.0 / i for i in range(1, m + 1))
