"""Exponential-family observation models and the empirical regression loss.

A response Y given covariate tensor X and coefficient tensor A follows

    p(y | theta) = h(y) exp{ c * (y * theta - a(theta) / c) },   theta = <X, A>,

where the cumulant ``a`` absorbs any replicate count m and scaling alpha of
the natural parameter.  The fitted objective is the negative log-likelihood
averaged over the sample,

    f(A) = (1/n) sum_i [ a(theta_i) - y_scale * y_i * theta_i + c(y_i) ],

whose gradient is ``(1/n) sum_i (a'(theta_i) - y_scale * y_i) X_i``.  The
carrier ``c`` is constant in A and is kept only for the Gaussian family
(c(y) = y^2/2), which makes f the familiar half mean squared error; the
combinatorial carriers of the count families are dropped.  Each family
exposes ``log_partition`` (a), its first two derivatives, the ``y_scale``
multiplier, and response sampling.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .errors import ArgumentError, NumericError, ShapeError

#: Poisson rates above this abort sampling: draws stop being meaningful
#: long before float overflow does.
MAX_POISSON_RATE = 1e9


class GlmFamily:
    """Base class for natural-parameter observation models."""

    name = "base"

    #: multiplier applied to y in the loss term y * theta
    y_scale = 1.0

    def log_partition(self, theta):
        raise NotImplementedError

    def log_partition_d1(self, theta):
        raise NotImplementedError

    def log_partition_d2(self, theta):
        raise NotImplementedError

    def mean_response(self, theta):
        """E[Y | theta]; equals log_partition_d1 / y_scale."""
        return self.log_partition_d1(theta) / self.y_scale

    def carrier(self, y):
        """Per-sample loss term constant in the coefficients."""
        return np.zeros_like(np.asarray(y, dtype=np.float64))

    def response_variance(self, theta):
        """Var[Y | theta]."""
        raise NotImplementedError

    def sample(self, theta, rng):
        raise NotImplementedError


class Gaussian(GlmFamily):
    """Identity-link Gaussian: Y = theta + sigma * N(0, 1)."""

    name = "gaussian"

    def __init__(self, sigma=1.0):
        if sigma < 0:
            raise ArgumentError("sigma must be nonnegative")
        self.sigma = float(sigma)

    def log_partition(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        return 0.5 * theta * theta

    def log_partition_d1(self, theta):
        return np.asarray(theta, dtype=np.float64)

    def log_partition_d2(self, theta):
        return np.ones_like(np.asarray(theta, dtype=np.float64))

    def response_variance(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        return np.full_like(theta, self.sigma**2)

    def carrier(self, y):
        # completes the square: the loss becomes (y - theta)^2 / 2
        y = np.asarray(y, dtype=np.float64)
        return 0.5 * y * y

    def sample(self, theta, rng):
        theta = np.asarray(theta, dtype=np.float64)
        return theta + self.sigma * rng.standard_normal(theta.shape)

    def __repr__(self):
        return f"Gaussian(sigma={self.sigma})"


class Logistic(GlmFamily):
    """Binomial counts out of m trials with success probability sigmoid(alpha * theta)."""

    name = "logistic"

    def __init__(self, m=1, alpha=1.0):
        if int(m) != m or m < 1:
            raise ArgumentError("m must be a positive integer trial count")
        if alpha <= 0:
            raise ArgumentError("alpha must be positive")
        self.m = int(m)
        self.alpha = float(alpha)

    @property
    def y_scale(self):
        return self.alpha

    def log_partition(self, theta):
        # m * log(1 + exp(alpha * theta)), overflow-safe
        theta = np.asarray(theta, dtype=np.float64)
        return self.m * np.logaddexp(0.0, self.alpha * theta)

    def log_partition_d1(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        return self.m * self.alpha * expit(self.alpha * theta)

    def log_partition_d2(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        p = expit(self.alpha * theta)
        return self.m * self.alpha**2 * p * (1.0 - p)

    def response_variance(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        p = expit(self.alpha * theta)
        return self.m * p * (1.0 - p)

    def sample(self, theta, rng):
        theta = np.asarray(theta, dtype=np.float64)
        return rng.binomial(self.m, expit(self.alpha * theta)).astype(np.float64)

    def __repr__(self):
        return f"Logistic(m={self.m}, alpha={self.alpha})"


class Poisson(GlmFamily):
    """Poisson counts with rate m * exp(alpha * theta)."""

    name = "poisson"

    def __init__(self, m=1, alpha=1.0):
        if m <= 0:
            raise ArgumentError("m must be positive")
        if alpha <= 0:
            raise ArgumentError("alpha must be positive")
        self.m = float(m)
        self.alpha = float(alpha)

    @property
    def y_scale(self):
        return self.alpha

    def log_partition(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        with np.errstate(over="ignore"):
            return self.m * np.exp(self.alpha * theta)

    def log_partition_d1(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        with np.errstate(over="ignore"):
            return self.m * self.alpha * np.exp(self.alpha * theta)

    def log_partition_d2(self, theta):
        return self.alpha * self.log_partition_d1(theta)

    def response_variance(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        with np.errstate(over="ignore"):
            return self.m * np.exp(self.alpha * theta)

    def sample(self, theta, rng):
        theta = np.asarray(theta, dtype=np.float64)
        with np.errstate(over="ignore"):
            rate = self.m * np.exp(self.alpha * theta)
        top = float(np.max(rate)) if rate.size else 0.0
        if not np.isfinite(top) or top > MAX_POISSON_RATE:
            raise NumericError(
                f"Poisson rate {top:.3g} exceeds {MAX_POISSON_RATE:.0e}; "
                "reduce alpha or the signal scale"
            )
        return rng.poisson(rate).astype(np.float64)

    def __repr__(self):
        return f"Poisson(m={self.m}, alpha={self.alpha})"


def family_from_params(kind, *, sigma=1.0, m=1, alpha=1.0):
    """Build a family object from plain scalars (CLI / config entry point)."""
    kind = str(kind).lower()
    if kind == "gaussian":
        return Gaussian(sigma=sigma)
    if kind == "logistic":
        return Logistic(m=m, alpha=alpha)
    if kind == "poisson":
        return Poisson(m=m, alpha=alpha)
    raise ArgumentError(f"unknown family {kind!r}")


@dataclass
class Dataset:
    """A regression sample: covariate tensors stacked on axis 0, responses, family."""

    x: np.ndarray
    y: np.ndarray
    family: GlmFamily
    truth: np.ndarray | None = None
    _x2d: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.x.ndim < 2:
            raise ShapeError("x must stack at least 1-way covariate tensors on axis 0")
        if self.y.shape != (self.x.shape[0],):
            raise ShapeError(f"y shape {self.y.shape} does not match n={self.x.shape[0]}")
        if self.truth is not None:
            self.truth = np.asarray(self.truth, dtype=np.float64)
            if self.truth.shape != self.dims:
                raise ShapeError(f"truth shape {self.truth.shape} does not match {self.dims}")
        self._x2d = self.x.reshape(self.x.shape[0], -1)

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def dims(self):
        return self.x.shape[1:]

    @property
    def x2d(self):
        """Covariates flattened to an (n, prod(dims)) design matrix."""
        return self._x2d


def linear_predictor(data, a):
    """theta_i = <X_i, A> for every sample."""
    a = np.asarray(a, dtype=np.float64)
    if a.shape != data.dims:
        raise ShapeError(f"coefficient shape {a.shape} does not match data dims {data.dims}")
    return data.x2d @ a.ravel()


def objective(data, a):
    """Averaged negative log-likelihood at ``a``."""
    theta = linear_predictor(data, a)
    fam = data.family
    return float(
        np.mean(fam.log_partition(theta) - fam.y_scale * data.y * theta + fam.carrier(data.y))
    )


def gradient(data, a):
    """Gradient of :func:`objective` at ``a``, shaped like the coefficient tensor."""
    return objective_and_gradient(data, a)[1]


def objective_and_gradient(data, a):
    """Objective value and gradient sharing one pass over the data."""
    theta = linear_predictor(data, a)
    fam = data.family
    # a diverging iterate can make these non-finite; the solvers treat
    # that as a divergence signal rather than an error here
    with np.errstate(invalid="ignore", over="ignore"):
        val = float(
            np.mean(
                fam.log_partition(theta) - fam.y_scale * data.y * theta + fam.carrier(data.y)
            )
        )
        w = fam.log_partition_d1(theta) - fam.y_scale * data.y
        grad = (data.x2d.T @ w) / data.n
    return val, grad.reshape(data.dims)
