"""Low-rank constraint cones and their (approximate) Euclidean projections.

Three families of cones over tensors are supported:

* ``theta1``: 3-way tensors whose frontal-slice ranks sum to at most r.
* ``theta2``: 3-way tensors with at most s nonzero frontal slices, each of
  rank at most r.
* ``theta3``: N-way tensors whose every mode-i matricization has rank at
  most r.

The ``theta1`` and ``theta2`` projections are exact Euclidean projections.
The ``theta3`` projection is the usual sequential mode-wise truncation,
which is only an approximation to the (intractable) exact projection; it
satisfies the inner-product identity <P(A), A> = |P(A)|_F^2 that the rest
of the package relies on.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, ShapeError
from .linalg import top_s_select, truncated_svd
from .tensors import frobenius_norm, matricize

KINDS = ("theta1", "theta2", "theta3")

#: Relative tolerance used by the numerical rank / support checks.
MEMBERSHIP_RTOL = 1e-9


@dataclass(frozen=True)
class ConstraintSpec:
    """A constraint cone: ``kind`` plus rank budget ``r`` (and slice budget ``s``)."""

    kind: str
    r: int
    s: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"unknown cone kind {self.kind!r}")
        if int(self.r) != self.r or self.r < 1:
            raise ArgumentError("r must be a positive integer")
        if self.kind == "theta2":
            if self.s is None or int(self.s) != self.s or self.s < 1:
                raise ArgumentError("theta2 requires a positive integer s")
        elif self.s is not None:
            raise ArgumentError(f"{self.kind} does not take an s parameter")

    def validate_dims(self, dims):
        """Raise ArgumentError if the cone is infeasible or vacuous for ``dims``."""
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims):
            raise ShapeError(f"invalid dims {dims}")
        if self.kind in ("theta1", "theta2") and len(dims) != 3:
            raise ShapeError(f"{self.kind} is defined for 3-way tensors, got {len(dims)}-way")
        if self.kind == "theta3" and len(dims) < 2:
            raise ShapeError("theta3 needs at least a 2-way tensor")
        d = dims
        if self.kind == "theta1":
            cap = d[2] * min(d[0], d[1])
            if self.r > cap:
                raise ArgumentError(f"r={self.r} exceeds total slice-rank capacity {cap}")
        elif self.kind == "theta2":
            if self.r > min(d[0], d[1]):
                raise ArgumentError(f"r={self.r} exceeds slice rank capacity {min(d[0], d[1])}")
            if self.s > d[2]:
                raise ArgumentError(f"s={self.s} exceeds slice count {d[2]}")
        else:
            cap = max(min(di, int(np.prod(d, dtype=np.int64)) // di) for di in d)
            if self.r > cap:
                raise ArgumentError(f"r={self.r} makes every rank constraint vacuous (cap {cap})")


def project_theta1(a, r):
    """Exact projection onto {sum of frontal-slice ranks <= r}.

    Equivalent to the best rank-r approximation of the block-diagonal
    matrix of frontal slices: keep the r largest singular triplets across
    all slices.  Ties break toward the lower (slice, position) pair.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 3:
        raise ShapeError("theta1 projection expects a 3-way tensor")
    d3 = a.shape[2]
    svds = [truncated_svd(a[:, :, j], min(a.shape[0], a.shape[1])) for j in range(d3)]
    q = svds[0].s.size
    flat = np.concatenate([t.s for t in svds])
    keep = np.argsort(-flat, kind="stable")[: int(r)]
    out = np.zeros_like(a)
    for idx in keep:
        j, i = divmod(int(idx), q)
        u, s, vt = svds[j]
        if s[i] > 0.0:
            out[:, :, j] += s[i] * np.outer(u[:, i], vt[i])
    return out


def project_theta2(a, r, s):
    """Exact projection onto {<= s nonzero frontal slices, each of rank <= r}.

    Two steps: best rank-r approximation of every slice, then keep the s
    slices with the largest truncated Frobenius norm (ties toward the
    lower slice index) and zero out the rest.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 3:
        raise ShapeError("theta2 projection expects a 3-way tensor")
    d3 = a.shape[2]
    svds = [truncated_svd(a[:, :, j], int(r)) for j in range(d3)]
    gains = np.array([float(np.dot(t.s, t.s)) for t in svds])
    support = top_s_select(gains, int(s))
    out = np.zeros_like(a)
    for j in support:
        u, sv, vt = svds[int(j)]
        out[:, :, int(j)] = (u * sv) @ vt
    return out


@dataclass(frozen=True)
class ProjectionInfo:
    """Diagnostics for the sequential theta3 projection."""

    passes: int
    converged: bool


def project_theta3(a, r, mode_order=None, max_passes=3, return_info=False):
    """Sequential mode-wise rank truncation onto {all mode ranks <= r}.

    Truncates each matricization to rank r in ``mode_order`` (default
    1..N).  A single pass already yields a member in exact arithmetic
    because later truncations act on the row space only; membership is
    still verified numerically and the pass repeated (up to
    ``max_passes``) if roundoff pushed a rank above r.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim < 2:
        raise ShapeError("theta3 projection needs at least a 2-way tensor")
    order = tuple(mode_order) if mode_order is not None else tuple(range(1, a.ndim + 1))
    if sorted(order) != list(range(1, a.ndim + 1)):
        raise ArgumentError(f"mode_order must be a permutation of 1..{a.ndim}")
    out = a
    passes = 0
    converged = False
    while passes < max_passes:
        for mode in order:
            m = matricize(out, mode)
            u, s, vt = truncated_svd(m, int(r))
            core = (u * s) @ vt
            out = np.moveaxis(
                core.reshape((out.shape[mode - 1],) + out.shape[: mode - 1] + out.shape[mode:]),
                0,
                mode - 1,
            )
        passes += 1
        if all(rk <= r for rk in mode_ranks(out)):
            converged = True
            break
    if return_info:
        return out, ProjectionInfo(passes=passes, converged=converged)
    return out


def project(a, spec):
    """Project ``a`` onto the cone described by ``spec``."""
    spec.validate_dims(np.shape(a))
    if spec.kind == "theta1":
        return project_theta1(a, spec.r)
    if spec.kind == "theta2":
        return project_theta2(a, spec.r, spec.s)
    return project_theta3(a, spec.r)


def mode_ranks(a, rel_tol=MEMBERSHIP_RTOL):
    """Numerical rank of every mode matricization of ``a``."""
    a = np.asarray(a, dtype=np.float64)
    ranks = []
    for mode in range(1, a.ndim + 1):
        s = np.linalg.svd(matricize(a, mode), compute_uv=False)
        ranks.append(_numrank(s, rel_tol))
    return tuple(ranks)


def slice_ranks(a, rel_tol=MEMBERSHIP_RTOL):
    """Numerical rank of every frontal slice of a 3-way tensor."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 3:
        raise ShapeError("slice_ranks expects a 3-way tensor")
    out = []
    for j in range(a.shape[2]):
        s = np.linalg.svd(a[:, :, j], compute_uv=False)
        out.append(_numrank(s, rel_tol))
    return tuple(out)


def _numrank(singular_values, rel_tol):
    if singular_values.size == 0 or singular_values[0] <= 0.0:
        return 0
    return int(np.count_nonzero(singular_values > rel_tol * singular_values[0]))


def is_member(a, spec, rel_tol=MEMBERSHIP_RTOL):
    """Numerical membership test for ``a`` in the cone of ``spec``.

    Slice support is judged against ``rel_tol`` times the tensor norm and
    ranks against ``rel_tol`` times the leading singular value.
    """
    a = np.asarray(a, dtype=np.float64)
    spec.validate_dims(a.shape)
    if spec.kind == "theta1":
        return sum(slice_ranks(a, rel_tol)) <= spec.r
    if spec.kind == "theta2":
        norm = frobenius_norm(a)
        active = [
            j
            for j in range(a.shape[2])
            if np.linalg.norm(a[:, :, j]) > rel_tol * max(norm, 1e-300)
        ]
        if len(active) > spec.s:
            return False
        ranks = slice_ranks(a, rel_tol)
        return all(ranks[j] <= spec.r for j in active)
    return all(rk <= spec.r for rk in mode_ranks(a, rel_tol))
