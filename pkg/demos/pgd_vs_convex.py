"""Non-convex descent versus the convex relaxation on one replicate.

Fits the same Gaussian dataset two ways: projected gradient descent onto
the rank cone, and nuclear-norm-regularized least squares over a penalty
path (the baseline the comparison tables use).  Prints the rmse curve
over the path; the non-convex estimate, which uses the true rank, wins.
"""

import numpy as np

from tenreg import (
    PgdConfig,
    RegularizerSpec,
    case_spec,
    make_dataset,
    pgd_solve,
    solve_regularized,
)


def main():
    spec = case_spec("6a/high")
    data = make_dataset(spec, replicate=0)
    print(f"{spec.key}: {spec.structure} truth at d={spec.dims}, n={spec.n}, sigma={spec.sigma}")

    best = None
    for eta in spec.eta_grid:
        trace = pgd_solve(data, PgdConfig(projection=spec.cone, eta=eta, max_iters=500, tol=1e-8))
        rmse = float(trace.rmse[-1])
        print(f"pgd eta={eta}: rmse {rmse:.3f}")
        best = rmse if best is None else min(best, rmse)

    print(f"\nconvex baseline ({spec.regularizer_kind}) over the penalty path:")
    est, state = None, None
    path = []
    for lam in sorted(spec.lambda_grid, reverse=True):
        reg = RegularizerSpec(kind=spec.regularizer_kind, lam=lam, max_iters=2000, tol=1e-5, rho=0.5)
        trace = solve_regularized(data, reg, init=est, warm_state=state)
        est, state = trace.estimate, trace.meta.get("state")
        rmse = float(np.linalg.norm(est - data.truth) / np.linalg.norm(data.truth))
        path.append(rmse)
        print(f"  lambda={lam}: rmse {rmse:.3f}")

    print(f"\nbest pgd {best:.3f} vs best convex {min(path):.3f}")


if __name__ == "__main__":
    main()
