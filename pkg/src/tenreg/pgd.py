"""Projected gradient descent over the low-rank constraint cones.

Each iteration takes a plain gradient step on the regression loss and maps
it back onto the constraint set with the cone projection:

    T_{k+1} = P(T_k - eta * grad f(T_k)).

The solver is non-convex but, with a feasible rank budget and a sane step
size, contracts toward the truth at a geometric rate; callers are expected
to pick ``eta`` by a small grid search.
"""

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .cones import ConstraintSpec, project
from .errors import ArgumentError, DivergenceError, ShapeError
from .glm import objective_and_gradient
from .tensors import frobenius_norm

#: Objective blowing past this multiple of the initial value aborts the run.
DIVERGENCE_FACTOR = 1e3


@dataclass(frozen=True)
class PgdConfig:
    """Solver knobs: constraint cone, step size, stopping rule, start point."""

    projection: ConstraintSpec
    eta: float
    max_iters: int = 500
    tol: float = 1e-8
    init: np.ndarray | None = None

    def __post_init__(self):
        if self.eta <= 0:
            raise ArgumentError("eta must be positive")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ArgumentError("max_iters must be a positive integer")
        if self.tol < 0:
            raise ArgumentError("tol must be nonnegative")


@dataclass
class RunTrace:
    """Per-iteration record of a solver run plus the final estimate.

    ``rmse`` holds the relative error |T_k - truth|_F / |truth|_F and is
    None when the dataset has no ground truth attached.
    """

    iterations: np.ndarray
    objective: np.ndarray
    seconds: np.ndarray
    estimate: np.ndarray
    termination: str
    rmse: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def write_csv(self, path):
        """Write the trace as ``iter,objective,rmse,seconds`` rows."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iter", "objective", "rmse", "seconds"])
            for i in range(self.iterations.size):
                rmse = "" if self.rmse is None else repr(float(self.rmse[i]))
                writer.writerow(
                    [
                        int(self.iterations[i]),
                        repr(float(self.objective[i])),
                        rmse,
                        repr(float(self.seconds[i])),
                    ]
                )


def _relative_error(estimate, truth, truth_norm):
    return frobenius_norm(estimate - truth) / truth_norm


def pgd_solve(data, cfg):
    """Run projected gradient descent on ``data`` and return a :class:`RunTrace`.

    Stops when the iterate change |T_{k+1} - T_k|_F falls to
    ``cfg.tol * max(1, |T_k|_F)`` or after ``cfg.max_iters`` steps.  Raises
    :class:`~tenreg.errors.DivergenceError` (with the partial trace
    attached) if the objective stops being finite or exceeds
    ``DIVERGENCE_FACTOR * max(1, |f(T_0)|)``: the usual symptom of a step
    size that is too large for the loss curvature.
    """
    if not isinstance(cfg.projection, ConstraintSpec):
        raise ArgumentError("cfg.projection must be a ConstraintSpec")
    cfg.projection.validate_dims(data.dims)

    if cfg.init is not None:
        t = np.array(cfg.init, dtype=np.float64)
        if t.shape != data.dims:
            raise ShapeError(f"init shape {t.shape} does not match data dims {data.dims}")
    else:
        t = np.zeros(data.dims)

    truth = data.truth
    truth_norm = frobenius_norm(truth) if truth is not None else None
    if truth is not None and truth_norm == 0.0:
        raise ArgumentError("ground truth has zero norm; relative error is undefined")

    iters, objs, errs, secs = [], [], [], []
    start = time.perf_counter()

    def record(k, f, t_k):
        iters.append(k)
        objs.append(f)
        if truth is not None:
            errs.append(_relative_error(t_k, truth, truth_norm))
        secs.append(time.perf_counter() - start)

    def finish(termination):
        return RunTrace(
            iterations=np.asarray(iters, dtype=np.int64),
            objective=np.asarray(objs),
            seconds=np.asarray(secs),
            estimate=t,
            termination=termination,
            rmse=np.asarray(errs) if truth is not None else None,
        )

    f, grad = objective_and_gradient(data, t)
    record(0, f, t)
    if not np.isfinite(f):
        raise DivergenceError(
            "objective is non-finite at the starting point", trace=finish("diverged")
        )
    blowup = DIVERGENCE_FACTOR * max(1.0, abs(f))

    termination = "max_iters"
    for k in range(1, cfg.max_iters + 1):
        g = t - cfg.eta * grad
        if not np.all(np.isfinite(g)):
            raise DivergenceError(
                f"gradient step is non-finite at iteration {k}; step size too large",
                trace=finish("diverged"),
            )
        t_next = project(g, cfg.projection)
        f, grad = objective_and_gradient(data, t_next)
        record(k, f, t_next)
        if not np.isfinite(f) or f > blowup or not np.all(np.isfinite(t_next)):
            t = t_next
            raise DivergenceError(
                f"objective {f:.3g} at iteration {k} signals divergence; "
                "step size too large",
                trace=finish("diverged"),
            )
        step = frobenius_norm(t_next - t)
        t = t_next
        if step <= cfg.tol * max(1.0, frobenius_norm(t)):
            termination = "converged"
            break

    return finish(termination)
