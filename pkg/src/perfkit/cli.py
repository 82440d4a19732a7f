"""``perfkit`` command line.

Exit status: 0 on success, 1 for usage errors, 2 for bad data.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from perfkit import amdahl, benchcmp, forecast, ingest, opanalysis, qnsolver, workload
from perfkit.errors import ParseError, PerfkitError, SaturationError

__all__ = ["SolredArgs", "parse_solred", "run_solred", "run_sweep", "build_parser", "main"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _num(text: str) -> float:
    return float(text)


def _fmt(x: float) -> str:
    return repr(float(x))


# -- solred -----------------------------------------------------------------------

@dataclass(frozen=True)
class SolredArgs:
    closed: bool
    lam: float = 0.0
    N: int = 0
    Z: float = 0.0
    pairs: tuple[tuple[float, float], ...] = ()
    sweep: tuple[float, float, float] | None = None

    def model(self, load: float | None = None) -> qnsolver.OpenModel | qnsolver.ClosedModel:
        stations = tuple(qnsolver.Station(str(i + 1), v, s) for i, (v, s) in enumerate(self.pairs))
        if self.closed:
            return qnsolver.ClosedModel(self.N if load is None else int(load), self.Z, stations)
        return qnsolver.OpenModel(self.lam if load is None else load, stations)


def parse_solred(values: Sequence[str], sweep: Sequence[str] | None = None) -> SolredArgs:
    """``kind (lambda | N Z) count V1 S1 ... Vk Sk``, as plain numeric tokens."""
    try:
        nums = [float(v) for v in values]
    except ValueError as exc:
        raise UsageError(f"non-numeric argument: {exc}") from None
    if not nums or nums[0] not in (0, 1):
        raise UsageError("first argument is the network type: 0 open, 1 closed")
    closed = nums[0] == 1
    head = 3 if closed else 2
    if len(nums) < head + 1:
        raise UsageError("missing load parameters or station count")
    count = nums[head]
    if count != int(count) or count < 1:
        raise UsageError("station count must be a positive integer")
    rest = nums[head + 1:]
    if len(rest) != 2 * int(count):
        raise UsageError(f"expected {2 * int(count)} visit/service values, got {len(rest)}")
    pairs = tuple((rest[2 * i], rest[2 * i + 1]) for i in range(int(count)))
    sw = None
    if sweep is not None:
        try:
            sw = tuple(float(v) for v in sweep)
        except ValueError:
            raise UsageError("sweep values must be numeric") from None
        if not sw[2] > 0:
            raise UsageError("sweep step must be positive")
    if closed:
        if nums[1] != int(nums[1]) or nums[1] < 0:
            raise UsageError("population must be a nonnegative integer")
        return SolredArgs(True, N=int(nums[1]), Z=nums[2], pairs=pairs, sweep=sw)  # type: ignore[arg-type]
    return SolredArgs(False, lam=nums[1], pairs=pairs, sweep=sw)  # type: ignore[arg-type]


_COLS = ("Vi", "Si", "Di", "Ui", "Ni", "Ri", "Xi")
_CELL = 10
_LABEL = 32


def _rule(width: int) -> str:
    return "*" * width


def _table(net: qnsolver.SolvedNetwork) -> list[str]:
    head = "*    *" + "".join(f"{c:^{_CELL}}*" for c in _COLS)
    blank = "*    *" + "".join(" " * _CELL + "*" for _ in _COLS)
    rule = _rule(len(head))
    out = [rule, head, rule, blank]
    for i, s in enumerate(net.stations, 1):
        cells = (s.V, s.S, s.D, s.U, s.N, s.R, s.X)
        out.append(f"* {i:>2} *" + "".join(f"{v:>{_CELL - 1}.4f} *" for v in cells))
        out.append(blank)
    out.append(rule)
    return out


def _block(rows: Sequence[tuple[str, str] | None]) -> list[str]:
    width = _LABEL + _CELL + 6
    sep = "* " + " " * _LABEL + " *" + " " * _CELL + " *"
    out = [_rule(width)]
    for r in rows:
        out.append(sep if r is None else f"* {r[0]:<{_LABEL}} *{r[1]:>{_CELL}} *")
    out.append(_rule(width))
    return out


def _asymptotes(lines: Sequence[str]) -> list[str]:
    width = _LABEL + _CELL + 6
    inner = width - 4
    return ([_rule(width), f"* {'LÍMITES ASINTÓTICOS':^{inner}} *", _rule(width)]
            + [f"* {t:<{inner}} *" for t in lines] + [_rule(width)])


def run_solred(args: SolredArgs) -> str:
    """Full report for one load point."""
    model = args.model()
    if args.closed:
        net = qnsolver.solve_mva(model, keep_trace=False)  # type: ignore[arg-type]
        b = qnsolver.asymptotic_bounds(model)  # type: ignore[arg-type]
        R = 0.0 if net.R is None else net.R
        system = _block([
            ("TRABAJOS EN EL SISTEMA", f"{args.N}"),
            ("TRABAJOS EN LOS DISPOSITIVOS", f"{net.N:.4f}"),
            ("TRABAJOS EN REFLEXIÓN", f"{args.N - net.N:.4f}"),
            ("PUNTO DE SATURACIÓN (N*)", "-" if net.N_star is None else f"{net.N_star}"),
            None,
            ("TIEMPO DE RESPUESTA", f"{R:.4f}"),
            ("TIEMPO DE RESPUESTA MÍNIMO (D)", f"{net.D:.4f}"),
            None,
            ("PRODUCTIVIDAD", f"{net.X0:.4f}"),
            ("PRODUCTIVIDAD MÁXIMA", f"{net.X_max:.4f}"),
        ])
        asym = _asymptotes([
            f"Ropt = máx {{ {b.D:.2f}, {b.D_b:.2f}*N-{b.Z:5.2f}}}",
            f"Xopt = mín {{N/{b.D + b.Z:5.2f}, {1.0 / b.D_b:.2f}}}",
        ])
    else:
        net = qnsolver.solve_open(model)  # type: ignore[arg-type]
        ob = qnsolver.open_bounds(model.stations)
        system = _block([
            ("TRABAJOS EN EL SISTEMA", f"{net.N:.4f}"),
            None,
            ("TIEMPO DE RESPUESTA", f"{net.R:.4f}"),
            ("TIEMPO DE RESPUESTA MÍNIMO (D)", f"{net.D:.4f}"),
            None,
            ("PRODUCTIVIDAD", f"{net.X0:.4f}"),
            ("PRODUCTIVIDAD MÁXIMA", f"{net.X_max:.4f}"),
        ])
        asym = _asymptotes([f"Ropt = {ob.R_opt:.4f}", f"Xopt = {ob.X_opt:.4f}"])
    return "\n".join(_table(net) + [""] + system + [""] + asym) + "\n"


def _loads(start: float, end: float, step: float, integer: bool) -> list[float]:
    count = math.floor((end - start) / step + 1e-9) + 1
    pts = [start + i * step for i in range(max(count, 0))]
    return [float(round(p)) for p in pts] if integer else pts


def run_sweep(args: SolredArgs, output: str = "gnuplot") -> str:
    """System response time and throughput for each load value.

    ``gnuplot`` output has two data blocks, (load, R) then (load, X), separated
    by two blank lines so they can be addressed with ``index``. An open sweep
    stops at the first load that saturates the bottleneck.
    """
    if args.sweep is None:
        raise UsageError("no sweep range given")
    rows: list[tuple[float, float, float]] = []
    note = ""
    for load in _loads(*args.sweep, integer=args.closed):
        if args.closed and load < 0:
            raise UsageError("population must be nonnegative")
        try:
            model = args.model(load)
            net = (qnsolver.solve_mva(model, keep_trace=False) if args.closed  # type: ignore[arg-type]
                   else qnsolver.solve_open(model))  # type: ignore[arg-type]
        except SaturationError as exc:
            note = f"# saturated from load {load:g}: {exc}\n"
            break
        rows.append((load, 0.0 if net.R is None else net.R, net.X0))
    ld = (lambda v: f"{int(v)}") if args.closed else (lambda v: f"{v:.4f}")
    if output == "csv":
        body = "load,R,X\n" + "".join(f"{ld(l)},{r:.4f},{x:.4f}\n" for l, r, x in rows)
    elif output == "pretty":
        body = f"{'load':>10} {'R':>10} {'X':>10}\n" + "".join(
            f"{ld(l):>10} {r:>10.4f} {x:>10.4f}\n" for l, r, x in rows)
    else:
        body = ("# load R\n" + "".join(f"{ld(l)} {r:.4f}\n" for l, r, _ in rows)
                + "\n\n# load X\n" + "".join(f"{ld(l)} {x:.4f}\n" for l, _, x in rows))
    return body + note


# -- input helpers ------------------------------------------------------------------

def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _csv_rows(text: str) -> list[tuple[int, list[str]]]:
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        cells = [c.strip() for c in row]
        if not cells or not any(cells) or cells[0].startswith("#"):
            continue
        rows.append((lineno, cells))
    return rows


def _numeric_rows(text: str, allow_header: bool = True) -> list[tuple[int, list[float]]]:
    rows = _csv_rows(text)
    out = []
    for k, (lineno, cells) in enumerate(rows):
        try:
            out.append((lineno, [float(c) for c in cells]))
        except ValueError:
            if k == 0 and allow_header:
                continue
            raise ParseError(f"non-numeric value in {cells}", line=lineno) from None
    return out


def _series(text: str) -> forecast.TimeSeries:
    rows = _numeric_rows(text)
    if not rows:
        raise ParseError("no data rows")
    widths = {len(v) for _, v in rows}
    if widths == {1}:
        return forecast.TimeSeries.of([v[0] for _, v in rows])
    if widths == {2}:
        return forecast.TimeSeries(tuple(v[0] for _, v in rows), tuple(v[1] for _, v in rows))
    bad = next(n for n, v in rows if len(v) != len(rows[0][1]) or len(v) > 2)
    raise ParseError("expected one column (y) or two columns (x,y)", line=bad)


def _named(spec: str, cast: Callable[[str], float] = float) -> tuple[str, float]:
    name, sep, value = spec.rpartition(":")
    if not sep or not name:
        raise UsageError(f"expected NAME:VALUE, got {spec!r}")
    try:
        return name, cast(value)
    except ValueError:
        raise UsageError(f"bad value in {spec!r}") from None


# -- subcommands -----------------------------------------------------------------

def cmd_amdahl(a: argparse.Namespace) -> str:
    if a.action == "speedup":
        return _fmt(amdahl.speedup(a.x, a.y)) + "\n"
    if a.action == "fraction":
        return _fmt(amdahl.fraction_for(a.x, a.y)) + "\n"
    if a.action == "factor":
        return _fmt(amdahl.factor_for(a.x, a.y)) + "\n"
    raise UsageError(f"unknown action {a.action}")


def cmd_amdahl_multi(a: argparse.Namespace) -> str:
    items = []
    for spec in a.items:
        f, sep, k = spec.partition(":")
        if not sep:
            raise UsageError(f"expected FRACTION:FACTOR, got {spec!r}")
        items.append((float(f), float(k)))
    s = amdahl.speedup_multi(items)
    out = _fmt(s) + "\n"
    if a.time is not None:
        out += _fmt(amdahl.improved_time(a.time, items)) + "\n"
    return out


def cmd_amdahl_flags(a: argparse.Namespace) -> str:
    """Flag form: ``--f``/``--k`` pairs and the unknown to solve for."""
    if a.solve == "A" or a.solve == "T":
        if not a.f or len(a.f) != len(a.k):
            raise UsageError("give one --k per --f")
        items = list(zip(a.f, a.k))
        if a.solve == "A":
            return _fmt(amdahl.speedup_multi(items)) + "\n"
        if a.T is None:
            raise UsageError("--solve T needs --T")
        return _fmt(amdahl.improved_time(a.T, items)) + "\n"
    if a.A is None:
        raise UsageError(f"--solve {a.solve} needs --A")
    if a.solve == "f":
        if len(a.k) != 1 or a.f:
            raise UsageError("--solve f takes exactly one --k")
        return _fmt(amdahl.fraction_for(a.A, a.k[0])) + "\n"
    if len(a.f) != 1 or a.k:
        raise UsageError("--solve k takes exactly one --f")
    return _fmt(amdahl.factor_for(a.A, a.f[0])) + "\n"


def _table_csv(text: str) -> benchcmp.MeasurementTable:
    rows = _csv_rows(text)
    if len(rows) < 2:
        raise ParseError("need a header and at least one program row")
    header = rows[0][1]
    programs, values = [], []
    for lineno, cells in rows[1:]:
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields", line=lineno)
        try:
            values.append([float(c) for c in cells[1:]])
        except ValueError:
            raise ParseError(f"non-numeric value in {cells}", line=lineno) from None
        programs.append(cells[0])
    return benchcmp.MeasurementTable(tuple(programs), tuple(header[1:]), np.array(values))


def cmd_bench_table(a: argparse.Namespace) -> str:
    table = _table_csv(_read(a.input))
    out = ""
    if a.spec_ref:
        ref = table.column(a.spec_ref)
        for s in table.systems:
            if s != a.spec_ref:
                out += f"spec {s} {_fmt(benchcmp.spec_index(ref, table.column(s)))}\n"
    if a.ci_alpha is not None:
        if len(table.systems) != 2:
            raise UsageError("--ci-alpha compares exactly two systems")
        x, y = table.systems
        r = benchcmp.paired_confidence(
            benchcmp.diffs_between(table.column(x), table.column(y)), a.ci_alpha)
        lo, hi = r.interval
        out += (f"diff {x}-{y} mean {_fmt(r.mean_diff)} interval {_fmt(lo)} {_fmt(hi)} "
                f"significant {'yes' if r.significant else 'no'}\n")
    if a.normalize_ref:
        table = benchcmp.normalize(table, a.normalize_ref)
    for s in table.systems:
        out += f"{a.mean} {s} {_fmt(benchcmp.mean(table.column(s), a.mean))}\n"
    return out


def cmd_bench_mean(a: argparse.Namespace) -> str:
    return _fmt(benchcmp.mean(a.values, a.kind)) + "\n"


def cmd_bench_ci(a: argparse.Namespace) -> str:
    rows = _numeric_rows(_read(a.file))
    if any(len(v) not in (1, 2) for _, v in rows):
        bad = next(n for n, v in rows if len(v) not in (1, 2))
        raise ParseError("expected a difference or an (a, b) pair per row", line=bad)
    diffs = [v[0] - v[1] if len(v) == 2 else v[0] for _, v in rows]
    r = benchcmp.paired_confidence(diffs, a.alpha)
    lo, hi = r.interval
    return (f"mean {_fmt(r.mean_diff)}\nstd {_fmt(r.std_dev)}\n"
            f"interval {_fmt(lo)} {_fmt(hi)}\n"
            f"significant {'yes' if r.significant else 'no'}\n")


def cmd_bench_spec(a: argparse.Namespace) -> str:
    return _fmt(benchcmp.spec_index(a.ref, a.sys)) + "\n"


def cmd_oplaws(a: argparse.Namespace) -> str:
    m = opanalysis.derive_metrics(opanalysis.DeviceObservation(a.T, a.A, a.C, a.B))
    out = f"lambda {_fmt(m.lam)}\nX {_fmt(m.X)}\nU {_fmt(m.U)}\n"
    out += f"S {'-' if m.S is None else _fmt(m.S)}\n"
    if a.N is not None:
        out += f"N {_fmt(a.N)}\nR {_fmt(opanalysis.interactive_response_time(a.N, m.X, a.Z))}\n"
    return out


def cmd_oplaws_visits(a: argparse.Namespace) -> str:
    rows = _numeric_rows(_read(a.file), allow_header=False)
    v = opanalysis.visit_ratios(np.array([r for _, r in rows]))
    return "".join(f"{i} {_fmt(x)}\n" for i, x in enumerate(v[1:], 1))


def cmd_cluster(a: argparse.Namespace) -> str:
    labels, data = [], []
    for lineno, cells in _csv_rows(_read(a.file)):
        try:
            float(cells[0])
            vals, lab = cells, str(len(labels) + 1)
        except ValueError:
            vals, lab = cells[1:], cells[0]
        try:
            data.append([float(c) for c in vals])
        except ValueError:
            if not data and not labels:
                continue  # header
            raise ParseError(f"non-numeric value in {cells}", line=lineno) from None
        labels.append(lab)
    if not data or len({len(r) for r in data}) != 1:
        raise ParseError("rows must be non-empty and equally wide")
    pts = np.array(data)
    if a.scale != "none":
        pts = workload.scale(pts, workload.ScalingSpec(a.scale))
    d = workload.mst_cluster(pts, labels, metric=a.metric, centroid=a.centroid,
                             decimals=a.decimals)
    if a.gnuplot:
        return d.gnuplot_coords()
    out = d.to_text(a.digits)
    if a.k:
        out += f"# {a.k} clusters\n"
        for members, c in d.cut(a.k):
            out += d.label(members) + " " + " ".join(f"{v:.{a.digits}f}" for v in c) + "\n"
    return out


def cmd_forecast(a: argparse.Namespace) -> str:
    series = _series(_read(a.file))
    method, _, arg = a.method.partition(":")
    if method == "ols":
        fit = forecast.linear_regression(series)
        out = f"a {_fmt(fit.a)}\nb {_fmt(fit.b)}\nmse {_fmt(fit.mse)}\n"
        if a.predict is not None:
            out += f"{_fmt(fit.predict(a.predict))}\n"
        return out
    if method == "ma":
        return f"{_fmt(forecast.moving_average(series, int(arg or 3)))}\n"
    if method == "exp":
        cfg = forecast.SmoothingConfig("fixed", alpha=float(arg or 0.5))
    elif method == "tustin":
        cfg = forecast.SmoothingConfig("tustin", alpha=float(arg or 0.5))
    elif method == "exp-var":
        parts = arg.split(":") if arg else []
        m = float(parts[0]) if parts else 2.0
        start = float(parts[1]) if len(parts) > 1 else None
        cfg = forecast.SmoothingConfig("variable", m=m, start=start)
    else:
        raise UsageError(f"unknown method {a.method!r}")
    res = forecast.exp_smoothing(series, cfg)
    return "".join(f"{_fmt(v)}\n" for v in res.trace)


def cmd_ingest(a: argparse.Namespace) -> str:
    text = _read(a.file)
    if a.kind == "vmstat":
        rep = ingest.parse_vmstat(text, decimal=a.decimal, strict=not a.lenient)
        out = "".join(f"{k} {_fmt(v)}\n" for k, v in ingest.summarize(rep.samples).items())
        out += "".join(f"# rejected line {n}: {why}\n" for n, why in rep.rejects)
        return out
    if a.kind.startswith("sar-"):
        rows = ingest.time_filter(ingest.parse_sar(text, a.kind[4:], a.decimal), a.start, a.end)
        if not rows:
            raise ParseError("no rows in the selected window")
        cols = [c for c, v in rows[0].values.items() if not isinstance(v, str)]
        return "".join(f"{c} {_fmt(math.fsum(r[c] for r in rows) / len(rows))}\n" for c in cols)
    if a.kind == "gprof":
        prof = ingest.parse_gprof(text, a.decimal)
        edits: list = [ingest.ScaleProc(*_named(s)) for s in a.faster]
        edits += [ingest.SetCalls(*_named(s)) for s in a.calls]
        edits += [ingest.SetMsPerCall(*_named(s)) for s in a.ms]
        w = ingest.gprof_what_if(prof, edits)
        out = f"total {_fmt(w.old_total)}\n"
        if prof.samples is not None:
            out += f"samples {_fmt(prof.samples)}\n"
        if edits:
            out += f"new_total {_fmt(w.new_total)}\nspeedup {_fmt(w.speedup)}\n"
        return out
    if a.kind == "top":
        t = ingest.parse_top_summary(text)
        out = "".join(f"cpu_{k} {_fmt(v)}\n" for k, v in t.cpu.items())
        if t.mem_kb:
            out += f"mem_used_pct {_fmt(t.mem_used_pct)}\n"
        return out
    if a.kind == "log":
        log = ingest.parse_access_log(text)
        recs = ingest.filter_records(log.records)
        if not a.edges or a.period is None:
            raise UsageError("log ingestion needs --edges and --period")
        groups = ingest.classify_by_size(recs, a.edges, a.labels)
        classes = ingest.build_workload_model(groups, a.period)
        out = "class,count,mean_bytes,share_pct,per_minute,interarrival\n"
        for g, c in zip(groups, classes):
            out += (f"{c.name},{c.count:g},{g.mean_size:.2f},{c.share_pct:.4f},"
                    f"{c.per_minute:.4f},{c.interarrival:.4f}\n")
        out += "".join(f"# rejected line {n}: {why}\n" for n, why in log.rejects)
        return out
    raise UsageError(f"unknown input kind {a.kind}")


def _describe(net: qnsolver.SolvedNetwork, closed: bool) -> str:
    b = net.stations[net.bottleneck.index].name
    R = "-" if net.R is None else f"{net.R:.4f}"
    out = f"X {net.X0:.4f}  R {R}  bottleneck {b} (D={net.bottleneck.D_b:.4f})"
    if closed and net.N_star is not None:
        out += f"  N* {net.N_star}"
    return out + "\n"


def cmd_whatif(a: argparse.Namespace) -> str:
    model = qnsolver.parse_model(_read(a.model))
    if a.population is not None:
        if not isinstance(model, qnsolver.ClosedModel):
            raise UsageError("--population applies to closed models only")
        model = qnsolver.ClosedModel(a.population, model.Z, model.stations)
    edits: list = [qnsolver.ScaleService(*_named(s)) for s in a.scale]
    edits += [qnsolver.SetService(*_named(s)) for s in a.service]
    edits += [qnsolver.SetVisits(*_named(s)) for s in a.visits]
    edits += [qnsolver.SplitStation(*_named(s, int)) for s in a.split]
    closed = isinstance(model, qnsolver.ClosedModel)
    solve = (lambda m: qnsolver.solve_mva(m, keep_trace=False)) if closed else qnsolver.solve_open
    out = "before: " + _describe(solve(model), closed)
    if edits:
        out += "after:  " + _describe(solve(qnsolver.what_if(model, edits)), closed)
    return out


def cmd_solred(a: argparse.Namespace) -> str:
    args = parse_solred(a.values, a.sweep)
    return run_sweep(args, a.output) if args.sweep else run_solred(args)


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="perfkit", description="Computer-system performance toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    am = sub.add_parser("amdahl", help="speedup from partial improvements")
    am.add_argument("--f", type=_num, action="append", default=[], help="fraction (repeatable)")
    am.add_argument("--k", type=_num, action="append", default=[], help="factor (repeatable)")
    am.add_argument("--solve", choices=("A", "f", "k", "T"), default="A")
    am.add_argument("--A", type=_num, help="target speedup when solving for f or k")
    am.add_argument("--T", type=_num, help="original time when solving for T")
    am.set_defaults(func=cmd_amdahl_flags)
    am_sub = am.add_subparsers(dest="action", parser_class=_Parser)
    for name, x, y in (("speedup", "fraction", "factor"), ("fraction", "target", "factor"),
                       ("factor", "target", "fraction")):
        sp = am_sub.add_parser(name)
        sp.add_argument("x", type=_num, metavar=x.upper())
        sp.add_argument("y", type=_num, metavar=y.upper())
        sp.set_defaults(func=cmd_amdahl)
    sp = am_sub.add_parser("multi", help="several disjoint improvements, FRACTION:FACTOR each")
    sp.add_argument("items", nargs="+")
    sp.add_argument("--time", type=_num, help="original execution time")
    sp.set_defaults(func=cmd_amdahl_multi)

    be = sub.add_parser("bench", help="benchmark summaries and comparisons")
    be.add_argument("--input", help="CSV matrix: header 'program,SYS1,...', one row per program")
    be.add_argument("--mean", choices=("arithmetic", "harmonic", "geometric"), default="geometric")
    be.add_argument("--normalize-ref", metavar="SYS")
    be.add_argument("--ci-alpha", type=_num, metavar="ALPHA")
    be.add_argument("--spec-ref", metavar="SYS")
    be.set_defaults(func=cmd_bench_table)
    be_sub = be.add_subparsers(dest="action", parser_class=_Parser)
    sp = be_sub.add_parser("mean")
    sp.add_argument("values", type=_num, nargs="+")
    sp.add_argument("--kind", choices=("arithmetic", "harmonic", "geometric"), default="arithmetic")
    sp.set_defaults(func=cmd_bench_mean)
    sp = be_sub.add_parser("ci", help="confidence interval of paired differences (CSV)")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--alpha", type=_num, default=0.05)
    sp.set_defaults(func=cmd_bench_ci)
    sp = be_sub.add_parser("spec", help="geometric-mean ratio index")
    sp.add_argument("--ref", type=_num, nargs="+", required=True)
    sp.add_argument("--sys", type=_num, nargs="+", required=True)
    sp.set_defaults(func=cmd_bench_spec)

    op = sub.add_parser("oplaws", help="operational laws from raw measurements")
    op_sub = op.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = op_sub.add_parser("device")
    for flag in ("T", "B"):
        sp.add_argument(f"--{flag}", type=_num, required=True)
    for flag in ("A", "C"):
        sp.add_argument(f"--{flag}", type=int, required=True)
    sp.add_argument("--N", type=_num, help="users, to apply the interactive response-time law")
    sp.add_argument("--Z", type=_num, default=0.0)
    sp.set_defaults(func=cmd_oplaws)
    sp = op_sub.add_parser("visits", help="visit ratios from a routing matrix (CSV)")
    sp.add_argument("file", nargs="?")
    sp.set_defaults(func=cmd_oplaws_visits)

    cl = sub.add_parser("cluster", help="agglomerative clustering of CSV rows")
    cl.add_argument("file", nargs="?")
    cl.add_argument("--metric", choices=("euclidean", "chi2"), default="euclidean")
    cl.add_argument("--scale", choices=("none", "zscore", "range", "log"), default="none")
    cl.add_argument("--centroid", choices=("midpoint", "mean"), default="midpoint")
    cl.add_argument("--decimals", type=int)
    cl.add_argument("--k", type=int)
    cl.add_argument("--digits", type=int, default=2)
    cl.add_argument("--gnuplot", action="store_true", help="emit dendrogram line segments")
    cl.set_defaults(func=cmd_cluster)

    fc = sub.add_parser("forecast", help="forecast a series read as CSV")
    fc.add_argument("file", nargs="?")
    fc.add_argument("--method", default="ols",
                    help="ols | ma:N | exp:ALPHA | exp-var:M[:START] | tustin:ALPHA")
    fc.add_argument("--predict", type=_num, help="x at which to evaluate the linear fit")
    fc.set_defaults(func=cmd_forecast)

    ig = sub.add_parser("ingest", help="summarize monitor output or access logs")
    ig.add_argument("kind", choices=("vmstat", "sar-u", "sar-d", "sar-b", "gprof", "top", "log"))
    ig.add_argument("file", nargs="?")
    ig.add_argument("--decimal", choices=(".", ","), default=".")
    ig.add_argument("--lenient", action="store_true", help="reject bad rows instead of failing")
    ig.add_argument("--start")
    ig.add_argument("--end")
    ig.add_argument("--faster", action="append", default=[], metavar="PROC:FACTOR")
    ig.add_argument("--calls", action="append", default=[], metavar="PROC:CALLS")
    ig.add_argument("--ms", action="append", default=[], metavar="PROC:MS")
    ig.add_argument("--edges", type=_num, nargs="+")
    ig.add_argument("--labels", nargs="+")
    ig.add_argument("--period", type=_num, help="observation period in seconds")
    ig.set_defaults(func=cmd_ingest)

    wi = sub.add_parser("whatif", help="solve a model file before and after edits")
    wi.add_argument("model")
    wi.add_argument("--population", type=int)
    wi.add_argument("--scale", action="append", default=[], metavar="STATION:FACTOR")
    wi.add_argument("--service", action="append", default=[], metavar="STATION:S")
    wi.add_argument("--visits", action="append", default=[], metavar="STATION:V")
    wi.add_argument("--split", action="append", default=[], metavar="STATION:PARTS")
    wi.set_defaults(func=cmd_whatif)

    so = sub.add_parser("solred", help="solve a network given as numbers on the command line")
    so.add_argument("values", nargs="+", help="0 LAMBDA K V1 S1 ... | 1 N Z K V1 S1 ...")
    so.add_argument("--sweep", nargs=3, metavar=("START", "END", "STEP"))
    so.add_argument("--output", choices=("gnuplot", "csv", "pretty"), default="gnuplot")
    so.set_defaults(func=cmd_solred)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        out = a.func(a)
    except UsageError as exc:
        print(f"perfkit: error: {exc}", file=sys.stderr)
        return 1
    except (PerfkitError, ValueError, OSError) as exc:
        print(f"perfkit: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
