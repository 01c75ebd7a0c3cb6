"""Low-rank tensor regression via projected gradient descent.

A numpy/scipy library for generalized linear regression with tensor
coefficients under three low-rank constraint families (slice-rank sum,
sparse low-rank slices, all-mode Tucker ranks), with exact/approximate
cone projections, nuclear-norm convex baselines, synthetic-data
generators, Gaussian-width estimates, and a benchmark harness.
"""

from .cones import (
    ConstraintSpec,
    is_member,
    mode_ranks,
    project,
    project_theta1,
    project_theta2,
    project_theta3,
    slice_ranks,
)
from .convex import (
    GridSearchResult,
    RegularizerSpec,
    default_lambda_grid,
    grid_search_lambda,
    prox_slice_nuclear,
    solve_regularized,
    svt,
)
from .errors import ArgumentError, DivergenceError, NumericError, ShapeError
from .glm import (
    Dataset,
    Gaussian,
    GlmFamily,
    Logistic,
    Poisson,
    family_from_params,
    gradient,
    linear_predictor,
    objective,
    objective_and_gradient,
)
from .pgd import PgdConfig, RunTrace, pgd_solve
from .simulate import (
    CASES,
    CaseSpec,
    case_spec,
    gen_covariates,
    gen_cp,
    gen_response,
    gen_sparse_slices,
    gen_tucker,
    list_cases,
    make_dataset,
    snr,
)
from .tensors import (
    dematricize,
    frobenius_norm,
    inner,
    load_tensor,
    matricize,
    save_tensor,
)
from .widths import (
    WidthEstimate,
    estimate_width_mc,
    width_bound_theta2,
    width_bound_theta3,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "CASES",
    "CaseSpec",
    "ConstraintSpec",
    "Dataset",
    "DivergenceError",
    "Gaussian",
    "GlmFamily",
    "GridSearchResult",
    "Logistic",
    "NumericError",
    "PgdConfig",
    "Poisson",
    "RegularizerSpec",
    "RunTrace",
    "ShapeError",
    "WidthEstimate",
    "case_spec",
    "default_lambda_grid",
    "dematricize",
    "estimate_width_mc",
    "family_from_params",
    "frobenius_norm",
    "gen_covariates",
    "gen_cp",
    "gen_response",
    "gen_sparse_slices",
    "gen_tucker",
    "gradient",
    "grid_search_lambda",
    "inner",
    "is_member",
    "linear_predictor",
    "list_cases",
    "load_tensor",
    "make_dataset",
    "matricize",
    "mode_ranks",
    "objective",
    "objective_and_gradient",
    "pgd_solve",
    "project",
    "project_theta1",
    "project_theta2",
    "project_theta3",
    "prox_slice_nuclear",
    "save_tensor",
    "slice_ranks",
    "snr",
    "solve_regularized",
    "svt",
    "width_bound_theta2",
    "width_bound_theta3",
]
