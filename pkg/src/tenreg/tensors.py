"""Dense tensor primitives: inner products, matricization, slicing, disk format.

Conventions used throughout the package:

* Tensors are ``numpy.ndarray`` of ``float64`` in C (row-major) order.
* Modes are numbered 1..N to match standard multilinear-algebra notation.
* The mode-``i`` matricization has shape ``(d_i, prod of the other dims)``;
  its columns enumerate the remaining indices in their original order with
  the last one varying fastest (C order).  ``dematricize`` inverts it.
"""

import numpy as np

from .errors import ArgumentError, ShapeError

_MAGIC = b"dtensor 1\n"


def _as_tensor(a, name="a"):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim < 1:
        raise ShapeError(f"{name} must have at least one axis")
    return a


def inner(a, b):
    """Euclidean inner product <a, b> of two same-shaped tensors."""
    a = _as_tensor(a)
    b = _as_tensor(b, "b")
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.dot(a.ravel(), b.ravel()))


def frobenius_norm(a):
    """Frobenius norm, i.e. the l2 norm of the flattened tensor."""
    return float(np.linalg.norm(np.asarray(a, dtype=np.float64).ravel()))


def matricize(a, mode):
    """Unfold tensor ``a`` along ``mode`` (1-based) into a matrix.

    Parameters
    ----------
    a : ndarray
        Tensor with N >= 1 axes.
    mode : int
        Mode index in 1..N.

    Returns
    -------
    ndarray of shape ``(a.shape[mode-1], a.size // a.shape[mode-1])``.
    """
    a = _as_tensor(a)
    if not 1 <= mode <= a.ndim:
        raise ArgumentError(f"mode {mode} out of range 1..{a.ndim}")
    return np.moveaxis(a, mode - 1, 0).reshape(a.shape[mode - 1], -1)


def dematricize(m, mode, dims):
    """Fold a mode-``mode`` matricization back into a tensor of shape ``dims``."""
    m = np.asarray(m, dtype=np.float64)
    dims = tuple(int(d) for d in dims)
    if not 1 <= mode <= len(dims):
        raise ArgumentError(f"mode {mode} out of range 1..{len(dims)}")
    moved = (dims[mode - 1],) + dims[: mode - 1] + dims[mode:]
    if m.shape != (moved[0], int(np.prod(moved[1:], dtype=np.int64))):
        raise ShapeError(f"matrix shape {m.shape} does not match dims {dims} at mode {mode}")
    return np.moveaxis(m.reshape(moved), 0, mode - 1)


def slab(a, mode, index):
    """Return the subtensor of ``a`` at position ``index`` (0-based) along ``mode``."""
    a = _as_tensor(a)
    if not 1 <= mode <= a.ndim:
        raise ArgumentError(f"mode {mode} out of range 1..{a.ndim}")
    if not 0 <= index < a.shape[mode - 1]:
        raise ArgumentError(f"index {index} out of range for mode {mode}")
    return np.take(a, index, axis=mode - 1)


def frontal_slices(a):
    """View a 3-way tensor as an iterator of its d3 frontal (d1 x d2) slices."""
    a = _as_tensor(a)
    if a.ndim != 3:
        raise ShapeError("frontal_slices expects a 3-way tensor")
    return (a[:, :, j] for j in range(a.shape[2]))


def save_tensor(path, a):
    """Write a tensor to ``path`` in the ``.dtn`` format.

    Layout: ASCII header ``dtensor 1\\n<N>\\n<d1 d2 ... dN>\\n`` followed by
    the raw little-endian float64 payload in C order.
    """
    a = _as_tensor(a)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(f"{a.ndim}\n".encode("ascii"))
        fh.write((" ".join(str(d) for d in a.shape) + "\n").encode("ascii"))
        fh.write(np.ascontiguousarray(a, dtype="<f8").tobytes())


def load_tensor(path):
    """Read a ``.dtn`` tensor written by :func:`save_tensor`."""
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ArgumentError(f"{path}: not a dtensor file")
        ndim = int(fh.readline().decode("ascii").strip())
        dims = tuple(int(tok) for tok in fh.readline().decode("ascii").split())
        if len(dims) != ndim or any(d <= 0 for d in dims):
            raise ArgumentError(f"{path}: malformed dimension header")
        count = int(np.prod(dims, dtype=np.int64))
        data = np.frombuffer(fh.read(8 * count), dtype="<f8")
        if data.size != count:
            raise ArgumentError(f"{path}: truncated payload")
    return data.reshape(dims).astype(np.float64)
