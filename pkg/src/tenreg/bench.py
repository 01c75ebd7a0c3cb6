"""Benchmark harness: replicate runner, rmse tables, convergence plots.

``run_case`` simulates replicates of a registry scenario, fits every
requested method over its tuning grid, and appends one row per
(replicate, method, grid point) to ``results.csv`` as it goes, so a
killed run keeps everything finished up to that point.  ``emit_table``
aggregates rows into the mean (sd) comparison at each method's best
tuning value, which is how the reference tables are defined: both the
step size and the penalty level are chosen to minimize mean rmse.

Everything except the wall-clock ``seconds`` column is a deterministic
function of the configuration and master seed.
"""

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cones import ConstraintSpec
from .convex import RegularizerSpec, solve_regularized
from .errors import ArgumentError, DivergenceError
from .pgd import PgdConfig, pgd_solve
from .simulate import case_spec, make_dataset
from .tensors import frobenius_norm

METHODS = ("pgd", "convex-r1", "convex-r2")

RESULT_COLUMNS = (
    "case",
    "method",
    "snr",
    "replicate",
    "param",
    "rmse",
    "iterations",
    "seconds",
    "status",
)

_LEVEL_ORDER = {"high": 0, "moderate": 1, "low": 2, "default": 3}


@dataclass(frozen=True)
class BenchConfig:
    """What to run: scenarios, methods, grids, replicate count, output dir."""

    cases: tuple
    methods: tuple
    outdir: str
    replicates: int = 50
    eta_grid: tuple | None = None
    lambda_grid: tuple | None = None
    rprime: int | None = None
    sprime: int | None = None
    master_seed: int = 0
    parallelism: int = 1
    heavy: bool = False
    pgd_max_iters: int = 500
    pgd_tol: float = 1e-8
    convex_max_iters: int = 2000
    convex_tol: float = 1e-6
    rho: float = 1.0

    def __post_init__(self):
        if not self.cases:
            raise ArgumentError("no cases requested")
        if not self.methods:
            raise ArgumentError("no methods requested")
        for m in self.methods:
            if m not in METHODS and m != "convex":
                raise ArgumentError(f"unknown method {m!r}")
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise ArgumentError("replicates must be a positive integer")
        if self.eta_grid is not None and len(self.eta_grid) == 0:
            raise ArgumentError("eta grid must be non-empty when given")
        if self.lambda_grid is not None and len(self.lambda_grid) == 0:
            raise ArgumentError("lambda grid must be non-empty when given")
        if int(self.parallelism) != self.parallelism or self.parallelism < 1:
            raise ArgumentError("parallelism must be a positive integer")


@dataclass(frozen=True)
class ResultRow:
    """One solver run: scenario, replicate, tuning value, final accuracy."""

    case: str
    method: str
    snr: str
    replicate: int
    param: float
    rmse: float | None
    iterations: int
    seconds: float
    status: str = "ok"

    def as_list(self):
        return [
            self.case,
            self.method,
            self.snr,
            int(self.replicate),
            repr(float(self.param)),
            "" if self.rmse is None else repr(float(self.rmse)),
            int(self.iterations),
            repr(float(self.seconds)),
            self.status,
        ]


def expand_case_keys(cases, heavy=False):
    """Expand case ids ("6a") and keys ("6a/high") into registry keys."""
    from .simulate import CASES

    keys = []
    for item in cases:
        if "/" in item:
            spec = case_spec(item)
            matches = [spec.key]
        else:
            matches = [k for k, v in CASES.items() if v.case == item]
            if not matches:
                raise ArgumentError(f"unknown case {item!r}")
        keys.extend(matches)
    seen = set()
    out = []
    for k in keys:
        if k not in seen:
            seen.add(k)
            out.append(k)
    for k in out:
        if case_spec(k).heavy and not heavy:
            raise ArgumentError(f"case {k} needs the heavy flag (large memory footprint)")
    return out


def _resolve_methods(cfg_methods, spec):
    out = []
    for m in cfg_methods:
        if m == "convex":
            m = f"convex-{spec.regularizer_kind}"
        if m not in out:
            out.append(m)
    return out


def _replicate_rows(cfg, key, replicate):
    """All rows for one replicate of one scenario (runs in a worker)."""
    spec = case_spec(key)
    data = make_dataset(spec, replicate, cfg.master_seed)
    rprime = cfg.rprime if cfg.rprime is not None else spec.r
    sprime = cfg.sprime if cfg.sprime is not None else spec.s
    if spec.cone.kind == "theta2":
        cone = ConstraintSpec("theta2", rprime, sprime)
    else:
        cone = ConstraintSpec(spec.cone.kind, rprime)

    rows = []
    for method in _resolve_methods(cfg.methods, spec):
        if method == "pgd":
            etas = cfg.eta_grid if cfg.eta_grid is not None else spec.eta_grid
            for eta in etas:
                pcfg = PgdConfig(
                    projection=cone,
                    eta=float(eta),
                    max_iters=cfg.pgd_max_iters,
                    tol=cfg.pgd_tol,
                )
                start = time.perf_counter()
                try:
                    trace = pgd_solve(data, pcfg)
                    rmse = float(trace.rmse[-1])
                    iters = int(trace.iterations[-1])
                    status = "ok"
                except DivergenceError as err:
                    trace = err.trace
                    rmse = None
                    iters = int(trace.iterations[-1]) if trace is not None else 0
                    status = "diverged"
                rows.append(
                    ResultRow(
                        case=spec.case,
                        method=method,
                        snr=spec.level,
                        replicate=replicate,
                        param=float(eta),
                        rmse=rmse,
                        iterations=iters,
                        seconds=time.perf_counter() - start,
                        status=status,
                    )
                )
        else:
            kind = method.removeprefix("convex-")
            lams = cfg.lambda_grid if cfg.lambda_grid is not None else spec.lambda_grid
            if not lams:
                raise ArgumentError(f"no lambda grid available for {spec.key}")
            est = None
            state = None
            for lam in sorted((float(v) for v in lams), reverse=True):
                reg = RegularizerSpec(
                    kind=kind,
                    lam=lam,
                    max_iters=cfg.convex_max_iters,
                    tol=cfg.convex_tol,
                    rho=cfg.rho,
                )
                start = time.perf_counter()
                trace = solve_regularized(data, reg, init=est, warm_state=state)
                est = trace.estimate
                state = trace.meta.get("state")
                rows.append(
                    ResultRow(
                        case=spec.case,
                        method=method,
                        snr=spec.level,
                        replicate=replicate,
                        param=lam,
                        rmse=frobenius_norm(est - data.truth) / frobenius_norm(data.truth),
                        iterations=int(trace.iterations[-1]),
                        seconds=time.perf_counter() - start,
                        status="ok" if trace.termination == "converged" else trace.termination,
                    )
                )
    return rows


def _append_rows(path, rows):
    new = not os.path.exists(path)
    with open(path, "a", newline="") as fh:
        writer = csv.writer(fh)
        if new:
            writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow(row.as_list())


def run_case(cfg, case, results_path=None):
    """Run one case id (all its levels) or one key; returns all rows.

    Rows are appended to ``<outdir>/results.csv`` (or ``results_path``)
    after every replicate so partial output survives interruption.
    """
    keys = expand_case_keys([case], heavy=cfg.heavy)
    os.makedirs(cfg.outdir, exist_ok=True)
    path = results_path or os.path.join(cfg.outdir, "results.csv")
    all_rows = []
    for key in keys:
        if cfg.parallelism > 1:
            with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
                futures = [
                    pool.submit(_replicate_rows, cfg, key, rep)
                    for rep in range(cfg.replicates)
                ]
                for fut in futures:
                    rows = fut.result()
                    _append_rows(path, rows)
                    all_rows.extend(rows)
        else:
            for rep in range(cfg.replicates):
                rows = _replicate_rows(cfg, key, rep)
                _append_rows(path, rows)
                all_rows.extend(rows)
    return all_rows


def run_bench(cfg):
    """Run every configured case; returns all rows."""
    rows = []
    for case in cfg.cases:
        rows.extend(run_case(cfg, case))
    return rows


def _sort_key(group_key):
    case, snr, method = group_key
    return (case, _LEVEL_ORDER.get(snr, 99), METHODS.index(method) if method in METHODS else 99)


def summarize(rows):
    """Best-tuning aggregation: one record per (case, snr, method).

    For each group the tuning value whose mean rmse over replicates is
    smallest is selected; the record carries that mean, its standard
    deviation, the replicate count, and how many runs were flagged
    (diverged or hit the iteration cap).
    """
    groups = {}
    for row in rows:
        groups.setdefault((row.case, row.snr, row.method), []).append(row)
    out = []
    for gkey in sorted(groups, key=_sort_key):
        grows = groups[gkey]
        flagged = sum(1 for r in grows if r.status == "diverged")
        by_param = {}
        for r in grows:
            if r.status != "diverged" and r.rmse is not None:
                by_param.setdefault(r.param, []).append(r.rmse)
        if not by_param:
            continue
        means = {p: float(np.mean(v)) for p, v in by_param.items()}
        best = min(sorted(means), key=lambda p: means[p])
        vals = np.asarray(by_param[best])
        sd = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
        out.append(
            {
                "case": gkey[0],
                "snr": gkey[1],
                "method": gkey[2],
                "param": best,
                "mean_rmse": means[best],
                "sd_rmse": sd,
                "replicates": int(vals.size),
                "flagged": flagged,
            }
        )
    return out


def emit_table(rows):
    """Render rows as an aligned text table plus a CSV string."""
    summary = summarize(rows)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["case", "snr", "method", "param", "mean_rmse", "sd_rmse", "replicates", "flagged"])
    for rec in summary:
        writer.writerow(
            [
                rec["case"],
                rec["snr"],
                rec["method"],
                repr(float(rec["param"])),
                repr(float(rec["mean_rmse"])),
                repr(float(rec["sd_rmse"])),
                rec["replicates"],
                rec["flagged"],
            ]
        )
    csv_text = buf.getvalue()

    if not summary:
        return "(no rows)\n", csv_text
    headers = ["case", "snr", "method", "param", "rmse mean (sd)", "reps", "flagged"]
    lines = []
    for rec in summary:
        lines.append(
            [
                rec["case"],
                rec["snr"],
                rec["method"],
                f"{rec['param']:.6g}",
                f"{rec['mean_rmse']:.2f} ({rec['sd_rmse']:.2f})",
                str(rec["replicates"]),
                str(rec["flagged"]),
            ]
        )
    widths = [max(len(headers[i]), *(len(l[i]) for l in lines)) for i in range(len(headers))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    text = "\n".join([fmt.format(*headers)] + [fmt.format(*l) for l in lines]) + "\n"
    return text, csv_text


def emit_convergence_plot(traces, path, csv_path=None, title=None, logy=True):
    """Plot labeled traces (rmse or objective vs iteration) to a vector file.

    ``traces`` is a list of (label, RunTrace).  The plotted series is the
    relative error when the trace has one, otherwise the objective.  The
    numbers behind the figure are always written next to it as CSV.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if not traces:
        raise ArgumentError("nothing to plot")
    csv_path = csv_path or os.path.splitext(path)[0] + ".csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "iter", "objective", "rmse"])
        for label, trace in traces:
            for i in range(trace.iterations.size):
                rmse = "" if trace.rmse is None else repr(float(trace.rmse[i]))
                writer.writerow(
                    [label, int(trace.iterations[i]), repr(float(trace.objective[i])), rmse]
                )

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    uses_rmse = all(trace.rmse is not None for _, trace in traces)
    for label, trace in traces:
        series = trace.rmse if uses_rmse else trace.objective
        if trace.termination == "diverged":
            label = f"{label} (diverged)"
        ax.plot(trace.iterations, series, label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel("relative error" if uses_rmse else "objective")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path, csv_path
