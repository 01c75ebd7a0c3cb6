"""Tensor primitives: inner products, (de)matricization, slices, disk format."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import array_shapes, arrays

from tenreg.errors import ArgumentError, ShapeError
from tenreg.simulate import gen_cp, gen_sparse_slices
from tenreg.tensors import (
    dematricize,
    frobenius_norm,
    frontal_slices,
    inner,
    load_tensor,
    matricize,
    save_tensor,
    slab,
)

finite_tensors = arrays(
    np.float64,
    array_shapes(min_dims=1, max_dims=4, min_side=1, max_side=4),
    elements=st.floats(-1e6, 1e6),
)


def test_inner_is_squared_frobenius_norm(rng):
    a = rng.standard_normal((3, 4, 5))
    assert inner(a, a) == pytest.approx(frobenius_norm(a) ** 2, rel=1e-12)


def test_inner_with_zero_tensor():
    a = np.arange(24.0).reshape(2, 3, 4)
    assert inner(a, np.zeros_like(a)) == 0.0


def test_inner_hand_value():
    # entries 1..8 against all-ones: 1+2+...+8 = 36
    a = np.arange(1.0, 9.0).reshape(2, 2, 2)
    assert inner(a, np.ones((2, 2, 2))) == 36.0


@given(finite_tensors)
def test_inner_symmetry(a):
    b = a[::-1].copy().reshape(a.shape)
    assert inner(a, b) == pytest.approx(inner(b, a), rel=1e-12, abs=1e-12)


def test_inner_shape_mismatch():
    with pytest.raises(ShapeError):
        inner(np.zeros((2, 3)), np.zeros((3, 2)))


@pytest.mark.parametrize("mode", [1, 2, 3])
def test_matricize_round_trip_is_exact(rng, mode):
    a = rng.standard_normal((3, 4, 5))
    m = matricize(a, mode)
    assert m.shape == (a.shape[mode - 1], a.size // a.shape[mode - 1])
    # pure index permutation: bit-exact, not just allclose
    assert np.array_equal(dematricize(m, mode, a.shape), a)


@pytest.mark.parametrize("mode", [1, 2, 3, 4])
def test_matricize_round_trip_four_way(rng, mode):
    a = rng.standard_normal((2, 2, 2, 2))
    assert np.array_equal(dematricize(matricize(a, mode), mode, a.shape), a)


@given(finite_tensors)
@settings(max_examples=50)
def test_matricize_round_trip_property(a):
    for mode in range(1, a.ndim + 1):
        assert np.array_equal(dematricize(matricize(a, mode), mode, a.shape), a)


def test_matricize_preserves_norm(rng):
    a = rng.standard_normal((4, 3, 6))
    for mode in (1, 2, 3):
        assert frobenius_norm(matricize(a, mode)) == pytest.approx(
            frobenius_norm(a), rel=1e-12
        )


def test_matricize_preserves_inner_product(rng):
    a = rng.standard_normal((4, 5, 3))
    b = rng.standard_normal((4, 5, 3))
    want = inner(a, b)
    for mode in (1, 2, 3):
        got = float(np.dot(matricize(a, mode).ravel(), matricize(b, mode).ravel()))
        assert got == pytest.approx(want, rel=1e-12)


def test_matricize_of_cp_tensor_has_low_rank(rng):
    t = gen_cp((6, 5, 4), 2, rng)
    s = np.linalg.svd(matricize(t, 1), compute_uv=False)
    assert np.all(s[2:] < 1e-10 * s[0])


def test_matricize_invalid_mode():
    a = np.zeros((2, 3, 4))
    for mode in (0, 4, -1):
        with pytest.raises(ArgumentError):
            matricize(a, mode)


def test_dematricize_zero_matrix():
    out = dematricize(np.zeros((3, 8)), 1, (3, 2, 4))
    assert out.shape == (3, 2, 4)
    assert not out.any()


def test_dematricize_shape_mismatch():
    with pytest.raises(ShapeError):
        dematricize(np.zeros((3, 7)), 1, (3, 2, 4))
    with pytest.raises(ArgumentError):
        dematricize(np.zeros((3, 8)), 5, (3, 2, 4))


def test_slab_extracts_frontal_slice(rng):
    a = rng.standard_normal((4, 5, 3))
    np.testing.assert_array_equal(slab(a, 3, 1), a[:, :, 1])
    with pytest.raises(ArgumentError):
        slab(a, 3, 3)
    with pytest.raises(ArgumentError):
        slab(a, 0, 0)


def test_frontal_slices_partition_norm(rng):
    a = rng.standard_normal((4, 4, 6))
    total = sum(np.linalg.norm(sl) ** 2 for sl in frontal_slices(a))
    assert total == pytest.approx(frobenius_norm(a) ** 2, rel=1e-12)


def test_frontal_slices_of_zero_tensor():
    for sl in frontal_slices(np.zeros((2, 2, 3))):
        assert not sl.any()


def test_frontal_slices_reassemble_exactly(rng):
    a = rng.standard_normal((3, 4, 5))
    rebuilt = np.stack(list(frontal_slices(a)), axis=2)
    assert np.array_equal(rebuilt, a)


def test_sparse_slice_generator_has_exact_support(rng):
    t = gen_sparse_slices((6, 6, 8), 2, 3, rng)
    nonzero = sum(1 for sl in frontal_slices(t) if np.linalg.norm(sl) > 0)
    assert nonzero == 3


def test_save_load_round_trip(tmp_path, rng):
    for shape in [(5,), (3, 4), (3, 4, 5), (2, 2, 2, 2)]:
        a = rng.standard_normal(shape)
        path = tmp_path / "t.dtn"
        save_tensor(path, a)
        b = load_tensor(path)
        assert b.shape == a.shape
        assert np.array_equal(a, b)


def test_load_rejects_foreign_file(tmp_path):
    path = tmp_path / "x.dtn"
    path.write_bytes(b"not a tensor at all")
    with pytest.raises(ArgumentError):
        load_tensor(path)


def test_load_rejects_truncated_payload(tmp_path, rng):
    a = rng.standard_normal((4, 4))
    path = tmp_path / "t.dtn"
    save_tensor(path, a)
    raw = path.read_bytes()
    path.write_bytes(raw[:-8])
    with pytest.raises(ArgumentError):
        load_tensor(path)
