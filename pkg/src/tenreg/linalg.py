"""Small dense linear-algebra helpers shared by the projection routines."""

from typing import NamedTuple

import numpy as np

from .errors import ArgumentError, NumericError


class SvdTriple(NamedTuple):
    """Leading singular triplets of a matrix: ``u @ diag(s) @ vt``."""

    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray


def truncated_svd(m, r):
    """Leading ``min(r, min(m.shape))`` singular triplets of a 2-d array.

    Singular values come back in non-increasing order.  Exact zeros are
    kept so the triplet count is deterministic.  A rank budget beyond
    ``min(m.shape)`` is clamped rather than rejected: rank constraints
    larger than the matrix are vacuous, and the mode-wise truncations
    rely on that reading.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ArgumentError("truncated_svd expects a matrix")
    if r < 1:
        raise ArgumentError("rank must be a positive integer")
    if not np.isfinite(m).all():
        raise NumericError("matrix has non-finite entries")
    k = min(int(r), min(m.shape))
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    return SvdTriple(u[:, :k], s[:k], vt[:k])


def best_rank(m, r):
    """Best rank-``r`` approximation of a matrix in Frobenius norm.

    ``r=0`` is allowed and returns the zero matrix.
    """
    if r == 0:
        m = np.asarray(m, dtype=np.float64)
        if m.ndim != 2:
            raise ArgumentError("best_rank expects a matrix")
        return np.zeros_like(m)
    u, s, vt = truncated_svd(m, r)
    return (u * s) @ vt


def top_s_select(values, s):
    """Indices of the ``s`` largest-magnitude entries of a 1-d array.

    Zeroing the complement of the returned support is the best
    ``s``-sparse approximation of ``v`` in l2.  ``s=0`` gives an empty
    set; ties break toward the lowest index; the result is sorted
    ascending so callers get a canonical support set.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ArgumentError("top_s_select expects a 1-d array")
    if not 0 <= s <= values.size:
        raise ArgumentError(f"s={s} out of range 0..{values.size}")
    order = np.argsort(-np.abs(values), kind="stable")
    return np.sort(order[: int(s)])
