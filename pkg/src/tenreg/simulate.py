"""Synthetic-data generators and the registry of benchmark scenarios.

Three coefficient structures are generated:

* ``cp``: sum of r rank-one outer products with orthonormal per-mode
  factors (the r leading left singular vectors of a Gaussian matrix),
  so the truth has CP rank at most r and Frobenius norm sqrt(r).
* ``tucker``: sequential rank-r truncation of an iid N(0,1) tensor, a
  member of the all-mode-ranks cone.
* ``slices``: s frontal slices set to U U^T for independent random
  orthonormal U (eigenvalues all one), the rest zero; requires d1 == d2
  and gives Frobenius norm sqrt(s * r).

Covariates are iid N(0,1) tensors and responses are drawn from the case's
observation family.  Every benchmark scenario (coefficient structure,
dimensions, sample size, family parameters per signal-to-noise level,
matching cone and regularizer, calibrated solver grids) lives in the
``CASES`` registry, keyed like ``"6a/high"``.

Replicate seeding is hierarchical: ``SeedSequence((master_seed, case
entropy, replicate))`` spawns independent child streams for the truth,
the covariates and the responses, so any replicate is reproducible in
isolation.
"""

from dataclasses import dataclass

import numpy as np

from .cones import ConstraintSpec, project_theta3
from .errors import ArgumentError, ShapeError
from .glm import Dataset, GlmFamily, family_from_params
from .tensors import frobenius_norm


def gen_cp(dims, r, rng):
    """Random CP-rank-r tensor with orthonormal per-mode factors."""
    dims = tuple(int(d) for d in dims)
    if any(r > d for d in dims):
        raise ArgumentError(f"r={r} exceeds a mode dimension in {dims}")
    factors = []
    for d in dims:
        g = rng.standard_normal((d, d))
        u = np.linalg.svd(g, full_matrices=False)[0]
        factors.append(u[:, :r])
    t = np.zeros(dims)
    for l in range(r):
        term = factors[0][:, l]
        for f in factors[1:]:
            term = np.multiply.outer(term, f[:, l])
        t += term
    return t


def gen_tucker(dims, r, rng):
    """Random member of the all-mode-ranks cone: truncate an iid N(0,1) tensor."""
    dims = tuple(int(d) for d in dims)
    g = rng.standard_normal(dims)
    return project_theta3(g, r)


def gen_sparse_slices(dims, r, s, rng):
    """Tensor with s random frontal slices equal to U U^T, the rest zero.

    Each kept slice gets its own random d x r orthonormal U, so all its
    nonzero eigenvalues are one and the slice norm is sqrt(r).
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or dims[0] != dims[1]:
        raise ShapeError("sparse-slices structure needs a d x d x d3 tensor")
    d, _, d3 = dims
    if r > d:
        raise ArgumentError(f"r={r} exceeds slice dimension {d}")
    if s > d3:
        raise ArgumentError(f"s={s} exceeds slice count {d3}")
    support = rng.choice(d3, size=s, replace=False)
    t = np.zeros(dims)
    for j in support:
        g = rng.standard_normal((d, r))
        u = np.linalg.svd(g, full_matrices=False)[0]
        t[:, :, int(j)] = u @ u.T
    return t


def gen_covariates(n, dims, rng):
    """n iid standard Gaussian covariate tensors stacked on axis 0."""
    if int(n) != n or n < 1:
        raise ArgumentError("n must be a positive integer")
    return rng.standard_normal((int(n),) + tuple(int(d) for d in dims))


def gen_response(family, x, t, rng):
    """Draw responses from ``family`` at the linear predictors <X_i, T>."""
    x = np.asarray(x, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if x.shape[1:] != t.shape:
        raise ShapeError(f"covariate dims {x.shape[1:]} do not match truth {t.shape}")
    theta = x.reshape(x.shape[0], -1) @ t.ravel()
    return family.sample(theta, rng)


def snr(t, family, samples=200_000, seed=0):
    """Signal-to-noise ratio of responses generated from truth ``t``.

    For the Gaussian family this is exactly |T|_F / sigma.  Otherwise it
    is estimated by Monte Carlo as sd(E[Y|theta]) / sqrt(mean Var[Y|theta])
    with theta ~ N(0, |T|_F^2), the exact predictor law under iid N(0,1)
    covariates.
    """
    norm = frobenius_norm(t)
    if norm == 0.0:
        raise ArgumentError("truth has zero norm; SNR is undefined")
    if family.name == "gaussian":
        if family.sigma == 0.0:
            return float("inf")
        return norm / family.sigma
    rng = np.random.default_rng(seed)
    theta = norm * rng.standard_normal(int(samples))
    signal = float(np.std(family.mean_response(theta)))
    noise = float(np.sqrt(np.mean(family.response_variance(theta))))
    return signal / noise


@dataclass(frozen=True)
class CaseSpec:
    """One fully resolved benchmark scenario (a case at one SNR level)."""

    case: str
    level: str
    structure: str
    dims: tuple
    n: int
    r: int
    s: int | None
    family_kind: str
    sigma: float | None = None
    m: int | None = None
    alpha: float | None = None
    heavy: bool = False
    #: step sizes the benchmark sweeps for PGD
    eta_grid: tuple = ()
    #: penalty levels the benchmark sweeps for the regularized baseline
    lambda_grid: tuple = ()

    @property
    def key(self):
        return f"{self.case}/{self.level}"

    @property
    def cone(self):
        """Constraint cone matching the coefficient structure."""
        if self.structure == "slices":
            return ConstraintSpec("theta2", self.r, self.s)
        return ConstraintSpec("theta3", self.r)

    @property
    def regularizer_kind(self):
        """Convex surrogate matching the structure: r1 for slices, r2 otherwise."""
        return "r1" if self.structure == "slices" else "r2"

    def family(self) -> GlmFamily:
        if self.family_kind == "gaussian":
            return family_from_params("gaussian", sigma=self.sigma)
        return family_from_params(self.family_kind, m=self.m, alpha=self.alpha)


def _desk(case, structure, family_kind, levels, s=None):
    out = {}
    for level, params, eta_grid, lambda_grid in levels:
        out[f"{case}/{level}"] = CaseSpec(
            case=case,
            level=level,
            structure=structure,
            dims=(10, 10, 10),
            n=1000,
            r=5,
            s=s,
            family_kind=family_kind,
            eta_grid=tuple(eta_grid),
            lambda_grid=tuple(lambda_grid),
            **params,
        )
    return out


def _heavy(case, structure, family_kind, dims, eta_grid, s=None, **params):
    spec = CaseSpec(
        case=case,
        level="default",
        structure=structure,
        dims=dims,
        n=4000,
        r=5,
        s=s,
        family_kind=family_kind,
        heavy=True,
        eta_grid=tuple(eta_grid),
        **params,
    )
    return {spec.key: spec}


# The grids below were calibrated once on held-out replicates (master
# seed 0, replicates outside the benchmark range were used during
# development): eta grids bracket the fastest stable step, lambda grids
# bracket the minimum of the rmse-vs-lambda curve so the grid search
# reports the regularizer's best performance.
CASES = {}
# Desk-scale comparison scenarios: d=10 per mode, n=1000, r=5 (s=5 for
# slice structure), three noise levels each, 50 replicates in the tables.
CASES.update(
    _desk(
        "6a",
        "cp",
        "gaussian",
        [
            ("high", {"sigma": 0.5}, (0.3, 0.5), (0.015, 0.03, 0.06, 0.12, 0.25)),
            ("moderate", {"sigma": 1.0}, (0.3, 0.5), (0.03, 0.06, 0.12, 0.25, 0.5)),
            ("low", {"sigma": 2.0}, (0.3, 0.5), (0.06, 0.12, 0.25, 0.5, 1.0)),
        ],
    )
)
CASES.update(
    _desk(
        "7a",
        "tucker",
        "gaussian",
        [
            ("high", {"sigma": 2.5}, (0.3, 0.5), (0.06, 0.12, 0.25, 0.5, 1.0)),
            ("moderate", {"sigma": 5.0}, (0.3, 0.5), (0.12, 0.25, 0.5, 1.0, 2.0)),
            ("low", {"sigma": 10.0}, (0.3, 0.5), (0.25, 0.5, 1.0, 2.0, 4.0)),
        ],
    )
)
CASES.update(
    _desk(
        "8a",
        "slices",
        "gaussian",
        [
            ("high", {"sigma": 0.5}, (0.3, 0.5), (0.006, 0.012, 0.025, 0.05, 0.1)),
            ("moderate", {"sigma": 1.0}, (0.3, 0.5), (0.012, 0.025, 0.05, 0.1, 0.2)),
            ("low", {"sigma": 2.0}, (0.3, 0.5), (0.025, 0.05, 0.1, 0.2, 0.4)),
        ],
        s=5,
    )
)
CASES.update(
    _desk(
        "6b",
        "cp",
        "logistic",
        [
            ("high", {"m": 20, "alpha": 3.5}, (0.01, 0.03), (0.01, 0.02, 0.04, 0.08)),
            ("moderate", {"m": 5, "alpha": 3.5}, (0.01, 0.03), (0.005, 0.01, 0.02, 0.04)),
            ("low", {"m": 1, "alpha": 3.5}, (0.01, 0.03), (0.002, 0.005, 0.01, 0.02)),
        ],
    )
)
CASES.update(
    _desk(
        "7b",
        "tucker",
        "logistic",
        [
            ("high", {"m": 20, "alpha": 0.5}, (0.3, 1.0), (0.0015, 0.003, 0.006, 0.012, 0.025)),
            ("moderate", {"m": 5, "alpha": 0.5}, (1.0, 3.0), (0.0008, 0.0015, 0.003, 0.006, 0.012)),
            ("low", {"m": 1, "alpha": 0.5}, (1.0, 3.0), (0.0003, 0.0008, 0.0015, 0.003, 0.006)),
        ],
    )
)
CASES.update(
    _desk(
        "8b",
        "slices",
        "logistic",
        [
            ("high", {"m": 20, "alpha": 1.2}, (0.03, 0.1), (0.0015, 0.003, 0.006, 0.012, 0.025)),
            ("moderate", {"m": 5, "alpha": 1.2}, (0.03, 0.1), (0.0008, 0.0015, 0.003, 0.006, 0.012)),
            ("low", {"m": 1, "alpha": 1.2}, (0.03, 0.1), (0.0003, 0.0008, 0.0015, 0.003, 0.006)),
        ],
        s=5,
    )
)
CASES.update(
    _desk(
        "6c",
        "cp",
        "poisson",
        [
            ("high", {"m": 20, "alpha": 0.5}, (0.01, 0.03), (0.1, 0.2, 0.4, 0.8)),
            ("moderate", {"m": 5, "alpha": 0.5}, (0.03, 0.1), (0.05, 0.1, 0.2, 0.4)),
            ("low", {"m": 1, "alpha": 0.5}, (0.1, 0.3), (0.025, 0.05, 0.1, 0.2)),
        ],
    )
)
CASES.update(
    _desk(
        "7c",
        "tucker",
        "poisson",
        [
            ("high", {"m": 20, "alpha": 0.06}, (0.3, 1.0), (0.006, 0.012, 0.025, 0.05, 0.1)),
            ("moderate", {"m": 5, "alpha": 0.06}, (1.0, 3.0), (0.003, 0.006, 0.012, 0.025, 0.05)),
            ("low", {"m": 1, "alpha": 0.06}, (3.0, 10.0), (0.0015, 0.003, 0.006, 0.012, 0.025)),
        ],
    )
)
CASES.update(
    _desk(
        "8c",
        "slices",
        "poisson",
        [
            ("high", {"m": 30, "alpha": 0.25}, (0.015, 0.03), (0.003, 0.006, 0.012, 0.025, 0.05)),
            ("moderate", {"m": 10, "alpha": 0.25}, (0.03, 0.1), (0.0015, 0.003, 0.006, 0.012, 0.025)),
            ("low", {"m": 5, "alpha": 0.25}, (0.1, 0.3), (0.0008, 0.0015, 0.003, 0.006, 0.012)),
        ],
        s=5,
    )
)
# Larger-scale scenarios (hundreds of MB to a few GB of covariates); the
# benchmark only touches these behind an explicit flag, and their lambda
# grids are left empty on purpose: pass one explicitly to run a convex
# baseline at this scale.
CASES.update(_heavy("1a", "cp", "gaussian", (50, 50, 50), (0.3, 0.5), sigma=0.5))
CASES.update(_heavy("2a", "tucker", "gaussian", (50, 50, 50), (0.3, 0.5), sigma=5.0))
CASES.update(_heavy("3a", "slices", "gaussian", (50, 50, 50), (0.3, 0.5), s=5, sigma=1.0))
CASES.update(_heavy("4a", "cp", "gaussian", (20, 20, 20, 20), (0.2, 0.4), sigma=0.5))
CASES.update(_heavy("5a", "tucker", "gaussian", (20, 20, 20, 20), (0.2, 0.4), sigma=5.0))
CASES.update(_heavy("1b", "cp", "logistic", (50, 50, 50), (0.1, 0.3), m=22, alpha=1.0))
CASES.update(_heavy("1c", "cp", "poisson", (50, 50, 50), (0.01, 0.03), m=10, alpha=0.5))


def case_spec(key):
    """Look up a scenario by ``"<case>/<level>"`` key (e.g. ``"7a/moderate"``)."""
    try:
        return CASES[key]
    except KeyError:
        raise ArgumentError(f"unknown case {key!r}; see list_cases()") from None


def list_cases(include_heavy=True):
    """All registry keys, optionally without the large-memory scenarios."""
    return [k for k, v in CASES.items() if include_heavy or not v.heavy]


def _case_entropy(key):
    return int.from_bytes(key.encode("ascii"), "big")


def replicate_seed(spec, replicate, master_seed=0):
    """Root SeedSequence for one replicate of one scenario."""
    if isinstance(spec, str):
        spec = case_spec(spec)
    return np.random.SeedSequence((int(master_seed), _case_entropy(spec.key), int(replicate)))


def make_truth(spec, rng):
    """Draw the coefficient tensor for a scenario."""
    if spec.structure == "cp":
        return gen_cp(spec.dims, spec.r, rng)
    if spec.structure == "tucker":
        return gen_tucker(spec.dims, spec.r, rng)
    if spec.structure == "slices":
        return gen_sparse_slices(spec.dims, spec.r, spec.s, rng)
    raise ArgumentError(f"unknown structure {spec.structure!r}")


def make_dataset(spec, replicate, master_seed=0):
    """Generate one replicate (truth, covariates, responses) of a scenario.

    ``spec`` may be a :class:`CaseSpec` or a registry key string.
    """
    if isinstance(spec, str):
        spec = case_spec(spec)
    ss_t, ss_x, ss_y = replicate_seed(spec, replicate, master_seed).spawn(3)
    truth = make_truth(spec, np.random.default_rng(ss_t))
    x = gen_covariates(spec.n, spec.dims, np.random.default_rng(ss_x))
    family = spec.family()
    y = gen_response(family, x, truth, np.random.default_rng(ss_y))
    return Dataset(x=x, y=y, family=family, truth=truth)
