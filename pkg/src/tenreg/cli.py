"""Command-line interface: simulate, solve, bench, gwidth.

Exit codes: 0 on success, 2 for configuration/usage errors, 3 when at
least one solver run diverged.
"""

import argparse
import csv
import json
import os
import sys
from importlib import resources

import numpy as np

from .bench import BenchConfig, emit_table, run_bench
from .cones import ConstraintSpec
from .convex import RegularizerSpec, solve_regularized
from .errors import ArgumentError, DivergenceError, NumericError, ShapeError
from .glm import Dataset, family_from_params
from .pgd import PgdConfig, pgd_solve
from .simulate import case_spec, list_cases, make_dataset, snr
from .tensors import frobenius_norm, load_tensor, save_tensor
from .widths import estimate_width_mc, width_bound_theta2, width_bound_theta3

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3


def _floats(text):
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ArgumentError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ArgumentError(f"expected comma-separated integers, got {text!r}") from None


def config_schema():
    """The published JSON schema for bench configuration files."""
    with resources.files("tenreg").joinpath("data/bench_config.schema.json").open() as fh:
        return json.load(fh)


def load_bench_config(path):
    """Read and validate a JSON bench config; raises ArgumentError on problems."""
    import jsonschema

    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as err:
        raise ArgumentError(f"cannot read config: {err}") from None
    except json.JSONDecodeError as err:
        raise ArgumentError(f"config is not valid JSON: {err}") from None
    try:
        jsonschema.validate(raw, config_schema())
    except jsonschema.ValidationError as err:
        raise ArgumentError(f"config does not match schema: {err.message}") from None
    raw["cases"] = tuple(raw["cases"])
    raw["methods"] = tuple(raw["methods"])
    for key in ("eta_grid", "lambda_grid"):
        if key in raw:
            raw[key] = tuple(raw[key])
    return BenchConfig(**raw)


def _cmd_simulate(args):
    spec = case_spec(args.case)
    data = make_dataset(spec, args.replicate, args.seed)
    os.makedirs(args.out, exist_ok=True)
    save_tensor(os.path.join(args.out, "truth.dtn"), data.truth)
    save_tensor(os.path.join(args.out, "covariates.dtn"), data.x)
    save_tensor(os.path.join(args.out, "responses.dtn"), data.y)
    fam = data.family
    meta = {
        "case": spec.key,
        "replicate": args.replicate,
        "master_seed": args.seed,
        "structure": spec.structure,
        "dims": list(spec.dims),
        "n": spec.n,
        "r": spec.r,
        "s": spec.s,
        "family": {
            "kind": spec.family_kind,
            "sigma": spec.sigma,
            "m": spec.m,
            "alpha": spec.alpha,
        },
        "cone": {"kind": spec.cone.kind, "r": spec.cone.r, "s": spec.cone.s},
        "regularizer_kind": spec.regularizer_kind,
    }
    with open(os.path.join(args.out, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    print(f"wrote {spec.key} replicate {args.replicate} to {args.out}")
    print(f"snr {snr(data.truth, fam):.2f}")
    return EXIT_OK


def _load_dataset(path):
    try:
        with open(os.path.join(path, "meta.json")) as fh:
            meta = json.load(fh)
    except OSError as err:
        raise ArgumentError(f"cannot read dataset meta: {err}") from None
    fam_info = meta["family"]
    family = family_from_params(
        fam_info["kind"],
        sigma=fam_info.get("sigma") or 1.0,
        m=fam_info.get("m") or 1,
        alpha=fam_info.get("alpha") or 1.0,
    )
    x = load_tensor(os.path.join(path, "covariates.dtn"))
    y = load_tensor(os.path.join(path, "responses.dtn"))
    truth_path = os.path.join(path, "truth.dtn")
    truth = load_tensor(truth_path) if os.path.exists(truth_path) else None
    return Dataset(x=x, y=y, family=family, truth=truth), meta


def _cmd_solve(args):
    data, meta = _load_dataset(args.data)
    os.makedirs(args.out, exist_ok=True)
    if args.method == "pgd":
        if args.eta is None:
            raise ArgumentError("pgd needs --eta")
        cone_kind = args.cone or meta["cone"]["kind"]
        r = args.rprime if args.rprime is not None else meta["cone"]["r"]
        s = args.sprime if args.sprime is not None else meta["cone"]["s"]
        cone = ConstraintSpec(cone_kind, r, s if cone_kind == "theta2" else None)
        cfg = PgdConfig(
            projection=cone, eta=args.eta, max_iters=args.max_iters, tol=args.tol
        )
        try:
            trace = pgd_solve(data, cfg)
        except DivergenceError as err:
            if err.trace is not None:
                err.trace.write_csv(os.path.join(args.out, "trace.csv"))
            print(f"diverged: {err}", file=sys.stderr)
            return EXIT_DIVERGED
    else:
        if args.lam is None:
            raise ArgumentError(f"{args.method} needs --lam")
        reg = RegularizerSpec(
            kind=args.method.removeprefix("convex-"),
            lam=args.lam,
            max_iters=args.max_iters,
            tol=args.tol,
            rho=args.rho,
        )
        trace = solve_regularized(data, reg)
    trace.write_csv(os.path.join(args.out, "trace.csv"))
    save_tensor(os.path.join(args.out, "estimate.dtn"), trace.estimate)
    print(f"termination: {trace.termination} after {int(trace.iterations[-1])} iterations")
    if trace.rmse is not None:
        print(f"final rmse {float(trace.rmse[-1]):.6f}")
    return EXIT_OK


def _cmd_bench(args):
    if args.schema:
        json.dump(config_schema(), sys.stdout, indent=2)
        print()
        return EXIT_OK
    if args.list_cases:
        for key in list_cases():
            spec = case_spec(key)
            heavy = " [heavy]" if spec.heavy else ""
            print(f"{key:14s} {spec.structure:7s} {spec.family_kind:9s} d={spec.dims} n={spec.n}{heavy}")
        return EXIT_OK
    if args.config:
        cfg = load_bench_config(args.config)
    else:
        if not args.cases or not args.methods or not args.out:
            raise ArgumentError("bench needs --config or all of --cases/--methods/--out")
        cfg = BenchConfig(
            cases=tuple(args.cases.split(",")),
            methods=tuple(args.methods.split(",")),
            outdir=args.out,
            replicates=args.replicates,
            eta_grid=_floats(args.eta_grid) if args.eta_grid else None,
            lambda_grid=_floats(args.lambda_grid) if args.lambda_grid else None,
            rprime=args.rprime,
            sprime=args.sprime,
            master_seed=args.seed,
            parallelism=args.parallelism,
            heavy=args.heavy,
            pgd_max_iters=args.pgd_max_iters,
            pgd_tol=args.pgd_tol,
            convex_max_iters=args.convex_max_iters,
            convex_tol=args.convex_tol,
            rho=args.rho,
        )
    rows = run_bench(cfg)
    text, csv_text = emit_table(rows)
    os.makedirs(cfg.outdir, exist_ok=True)
    with open(os.path.join(cfg.outdir, "table.txt"), "w") as fh:
        fh.write(text)
    with open(os.path.join(cfg.outdir, "table.csv"), "w") as fh:
        fh.write(csv_text)
    if not rows:
        print("warning: no rows produced", file=sys.stderr)
    sys.stdout.write(text)
    if any(r.status == "diverged" for r in rows):
        print("warning: at least one run diverged", file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK


def _cmd_gwidth(args):
    dims = _ints(args.dims)
    spec = ConstraintSpec(args.kind, args.r, args.s if args.kind == "theta2" else None)
    est = estimate_width_mc(spec, dims, samples=args.samples, seed=args.seed)
    if args.kind == "theta2":
        bound = width_bound_theta2(*dims, args.r, args.s)
    elif args.kind == "theta3" and len(dims) == 3:
        bound = width_bound_theta3(*dims, args.r)
    else:
        bound = None
    row = [
        f"{args.kind}(r={args.r}" + (f",s={args.s})" if args.s is not None else ")"),
        "x".join(str(d) for d in dims),
        est.samples,
        repr(est.mean),
        repr(est.std_error),
        est.kind,
        "" if bound is None else repr(bound),
    ]
    header = ["spec", "dims", "samples", "mean", "std_error", "kind", "bound"]
    if args.out:
        new = not os.path.exists(args.out)
        with open(args.out, "a", newline="") as fh:
            writer = csv.writer(fh)
            if new:
                writer.writerow(header)
            writer.writerow(row)
    writer = csv.writer(sys.stdout)
    writer.writerow(header)
    writer.writerow(row)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tenreg",
        description="Low-rank tensor regression: simulation, solvers, benchmark tables, widths",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate one replicate of a registry case to disk")
    p.add_argument("--case", required=True, help='case key, e.g. "6a/high"')
    p.add_argument("--replicate", type=int, default=0)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("solve", help="run one solver on a dataset directory")
    p.add_argument("--data", required=True, help="directory written by simulate")
    p.add_argument("--method", required=True, choices=["pgd", "convex-r1", "convex-r2"])
    p.add_argument("--eta", type=float, help="pgd step size")
    p.add_argument("--lam", type=float, help="convex penalty level")
    p.add_argument("--cone", choices=["theta1", "theta2", "theta3"], help="override pgd cone")
    p.add_argument("--rprime", type=int, help="rank budget (default: dataset's true r)")
    p.add_argument("--sprime", type=int, help="slice budget (default: dataset's true s)")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--out", required=True, help="output directory (trace.csv, estimate.dtn)")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("bench", help="run the replicate benchmark and emit tables")
    p.add_argument("--config", help="JSON config file (see --schema)")
    p.add_argument("--schema", action="store_true", help="print the config schema and exit")
    p.add_argument("--list-cases", action="store_true", help="list registry cases and exit")
    p.add_argument("--cases", help="comma-separated case ids or keys")
    p.add_argument("--methods", help="comma-separated: pgd,convex,convex-r1,convex-r2")
    p.add_argument("--replicates", type=int, default=50)
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--eta-grid", help="comma-separated step sizes (default: per-case)")
    p.add_argument("--lambda-grid", help="comma-separated penalties (default: per-case)")
    p.add_argument("--rprime", type=int)
    p.add_argument("--sprime", type=int)
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--heavy", action="store_true", help="allow large-memory cases")
    p.add_argument("--pgd-max-iters", type=int, default=500)
    p.add_argument("--pgd-tol", type=float, default=1e-8)
    p.add_argument("--convex-max-iters", type=int, default=2000)
    p.add_argument("--convex-tol", type=float, default=1e-6)
    p.add_argument("--rho", type=float, default=1.0)
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("gwidth", help="Monte-Carlo Gaussian width of a constraint cone")
    p.add_argument("--kind", required=True, choices=["theta1", "theta2", "theta3"])
    p.add_argument("--dims", required=True, help="comma-separated, e.g. 10,10,10")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-s", type=int)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="append the row to this CSV file")
    p.set_defaults(fn=_cmd_gwidth)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ArgumentError, ShapeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as err:
        print(f"numeric error: {err}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
