"""Benchmark harness: config, case expansion, aggregation, reproducibility."""

import csv
import io
import os

import numpy as np
import pytest

from tenreg.bench import (
    RESULT_COLUMNS,
    BenchConfig,
    ResultRow,
    _replicate_rows,
    emit_convergence_plot,
    emit_table,
    expand_case_keys,
    run_bench,
    run_case,
    summarize,
)
from tenreg.errors import ArgumentError
from tenreg.pgd import RunTrace


def _cfg(tmp_path, **kw):
    base = dict(
        cases=("6a/high",),
        methods=("pgd",),
        outdir=str(tmp_path / "out"),
        replicates=1,
        eta_grid=(0.3,),
        pgd_max_iters=60,
    )
    base.update(kw)
    return BenchConfig(**base)


# ---------------------------------------------------------------------------
# configuration and case expansion


def test_config_validation(tmp_path):
    with pytest.raises(ArgumentError):
        _cfg(tmp_path, cases=())
    with pytest.raises(ArgumentError):
        _cfg(tmp_path, methods=())
    with pytest.raises(ArgumentError):
        _cfg(tmp_path, methods=("newton",))
    with pytest.raises(ArgumentError):
        _cfg(tmp_path, replicates=0)
    with pytest.raises(ArgumentError):
        _cfg(tmp_path, eta_grid=())
    with pytest.raises(ArgumentError):
        _cfg(tmp_path, lambda_grid=())
    with pytest.raises(ArgumentError):
        _cfg(tmp_path, parallelism=0)
    assert _cfg(tmp_path, methods=("convex",)).methods == ("convex",)


def test_expand_case_ids_to_levels():
    assert expand_case_keys(["6a"]) == ["6a/high", "6a/moderate", "6a/low"]
    assert expand_case_keys(["7a/moderate"]) == ["7a/moderate"]
    # duplicates collapse, order of first appearance wins
    assert expand_case_keys(["6a/low", "6a"]) == ["6a/low", "6a/high", "6a/moderate"]


def test_expand_gates_heavy_cases():
    with pytest.raises(ArgumentError):
        expand_case_keys(["1a"])
    assert expand_case_keys(["1a"], heavy=True) == ["1a/default"]
    with pytest.raises(ArgumentError):
        expand_case_keys(["zz"])


# ---------------------------------------------------------------------------
# running


def test_run_case_writes_one_row_per_grid_point(tmp_path):
    cfg = _cfg(tmp_path)
    rows = run_case(cfg, "6a/high")
    assert len(rows) == 1
    row = rows[0]
    assert (row.case, row.snr, row.method) == ("6a", "high", "pgd")
    assert row.param == 0.3
    assert row.status == "ok"
    assert 0.0 < row.rmse < 1.0
    path = os.path.join(cfg.outdir, "results.csv")
    with open(path, newline="") as fh:
        recs = list(csv.reader(fh))
    assert recs[0] == list(RESULT_COLUMNS)
    assert len(recs) == 2
    assert recs[1][0] == "6a" and recs[1][5] == repr(float(row.rmse))


def test_convex_method_resolves_to_structure(tmp_path):
    cfg = _cfg(
        tmp_path,
        cases=("8a/high",),
        methods=("convex",),
        lambda_grid=(0.05,),
        convex_max_iters=200,
    )
    rows = run_bench(cfg)
    assert [r.method for r in rows] == ["convex-r1"]
    assert rows[0].rmse < 1.0


def test_missing_lambda_grid_is_an_error(tmp_path):
    cfg = _cfg(tmp_path, cases=("1a/default",), methods=("convex-r2",), heavy=True)
    with pytest.raises(ArgumentError, match="lambda grid"):
        _replicate_rows(cfg, "1a/default", 0)


def test_replicates_are_order_independent(tmp_path):
    cfg = _cfg(tmp_path, replicates=2)
    rows = run_case(cfg, "6a/high")
    direct = _replicate_rows(cfg, "6a/high", 1)
    assert rows[1].rmse == direct[0].rmse
    assert rows[1].iterations == direct[0].iterations


def test_runs_are_deterministic_up_to_wall_clock(tmp_path):
    seconds_col = RESULT_COLUMNS.index("seconds")

    def stripped(outdir):
        cfg = _cfg(tmp_path, outdir=str(tmp_path / outdir), replicates=2)
        run_bench(cfg)
        with open(os.path.join(cfg.outdir, "results.csv"), newline="") as fh:
            recs = list(csv.reader(fh))
        return [rec[:seconds_col] + rec[seconds_col + 1 :] for rec in recs]

    assert stripped("a") == stripped("b")


# ---------------------------------------------------------------------------
# aggregation


def _row(case="6a", method="pgd", snr="high", rep=0, param=0.3, rmse=0.1, status="ok"):
    return ResultRow(
        case=case,
        method=method,
        snr=snr,
        replicate=rep,
        param=param,
        rmse=rmse,
        iterations=10,
        seconds=0.5,
        status=status,
    )


def test_summarize_picks_best_mean_param():
    rows = [
        _row(rep=0, param=0.3, rmse=0.30),
        _row(rep=1, param=0.3, rmse=0.40),
        _row(rep=0, param=0.5, rmse=0.20),
        _row(rep=1, param=0.5, rmse=0.25),
    ]
    (rec,) = summarize(rows)
    assert rec["param"] == 0.5
    assert rec["mean_rmse"] == pytest.approx(0.225)
    assert rec["replicates"] == 2


def test_summarize_hand_statistics():
    rows = [_row(rep=i, rmse=v) for i, v in enumerate([0.1, 0.2, 0.4])]
    (rec,) = summarize(rows)
    assert rec["mean_rmse"] == pytest.approx(0.7 / 3.0, rel=1e-12)
    assert rec["sd_rmse"] == pytest.approx(np.std([0.1, 0.2, 0.4], ddof=1), rel=1e-12)
    assert rec["flagged"] == 0


def test_summarize_tie_breaks_to_smaller_param():
    rows = [_row(param=0.1, rmse=0.2), _row(param=0.9, rmse=0.2)]
    (rec,) = summarize(rows)
    assert rec["param"] == 0.1


def test_summarize_counts_diverged_and_drops_them():
    rows = [
        _row(rep=0, rmse=0.2),
        _row(rep=1, rmse=None, status="diverged"),
    ]
    (rec,) = summarize(rows)
    assert rec["flagged"] == 1
    assert rec["replicates"] == 1
    assert rec["mean_rmse"] == pytest.approx(0.2)


def test_summarize_orders_levels_and_methods():
    rows = [
        _row(snr="low"),
        _row(snr="high", method="convex-r2"),
        _row(snr="high"),
        _row(snr="moderate"),
    ]
    recs = summarize(rows)
    assert [(r["snr"], r["method"]) for r in recs] == [
        ("high", "pgd"),
        ("high", "convex-r2"),
        ("moderate", "pgd"),
        ("low", "pgd"),
    ]


def test_emit_table_empty_and_single():
    text, csv_text = emit_table([])
    assert text == "(no rows)\n"
    assert csv_text.splitlines()[0].startswith("case,snr,method")
    assert len(csv_text.splitlines()) == 1

    text, csv_text = emit_table([_row(rmse=0.125)])
    assert "0.12 (0.00)" in text
    rec = next(csv.DictReader(io.StringIO(csv_text)))
    assert rec["mean_rmse"] == repr(0.125)
    assert rec["sd_rmse"] == repr(0.0)


def test_result_row_serializes_missing_rmse():
    row = _row(rmse=None, status="diverged")
    cells = row.as_list()
    assert cells[RESULT_COLUMNS.index("rmse")] == ""
    assert cells[RESULT_COLUMNS.index("status")] == "diverged"


# ---------------------------------------------------------------------------
# plots


def _trace(values, termination="converged"):
    vals = np.asarray(values, dtype=np.float64)
    iters = np.arange(vals.size)
    return RunTrace(
        iterations=iters,
        objective=vals,
        seconds=np.linspace(0.0, 1.0, vals.size),
        estimate=np.zeros((2, 2, 2)),
        termination=termination,
        rmse=vals / 2.0,
    )


def test_convergence_plot_writes_figure_and_numbers(tmp_path):
    path = str(tmp_path / "conv.svg")
    traces = [
        ("eta=0.3", _trace([1.0, 0.1, 0.01])),
        ("eta=0.9", _trace([1.0, 2.0], termination="diverged")),
    ]
    out_path, csv_path = emit_convergence_plot(traces, path, title="demo")
    assert os.path.exists(out_path) and os.path.getsize(out_path) > 0
    with open(out_path) as fh:
        body = fh.read()
    assert "<svg" in body
    assert "diverged" in body  # the label carries the divergence flag
    with open(csv_path, newline="") as fh:
        recs = list(csv.DictReader(fh))
    assert len(recs) == 5
    assert recs[0]["label"] == "eta=0.3"
    assert recs[2]["objective"] == repr(0.01)
    assert recs[2]["rmse"] == repr(0.005)


def test_convergence_plot_rejects_empty(tmp_path):
    with pytest.raises(ArgumentError):
        emit_convergence_plot([], str(tmp_path / "x.svg"))
