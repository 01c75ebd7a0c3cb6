"""Monte-Carlo width estimates against direct oracles and closed-form caps."""

import numpy as np
import pytest

from tenreg.cones import ConstraintSpec
from tenreg.errors import ArgumentError
from tenreg.widths import estimate_width_mc, width_bound_theta2, width_bound_theta3


def test_full_space_cone_recovers_gaussian_norm():
    # with r = min(d1, d2) and s = d3 the projection is the identity, so the
    # statistic is |G|_F and its mean must sit at E|G| ~= sqrt(D)
    est = estimate_width_mc(ConstraintSpec("theta2", 10, 10), (10, 10, 10), samples=200)
    assert est.kind == "exact-cone"
    assert abs(est.mean - np.sqrt(1000.0)) / np.sqrt(1000.0) <= 0.01


def test_scalar_slices_match_max_abs_oracle():
    # at 1 x 1 x d3 with (r=1, s=1) the projected norm is exactly max_j |g_j|
    spec = ConstraintSpec("theta2", 1, 1)
    est = estimate_width_mc(spec, (1, 1, 16), samples=50, seed=7)
    vals = [
        float(np.abs(np.random.default_rng(child).standard_normal((1, 1, 16))).max())
        for child in np.random.SeedSequence(7).spawn(50)
    ]
    assert est.mean == float(np.mean(vals))
    assert est.std_error == float(np.std(vals, ddof=1) / np.sqrt(50))


def test_theta1_statistic_matches_singular_value_oracle():
    # global top-r singular triplets: projected norm is the root of the sum
    # of the r largest squared singular values pooled across frontal slices
    spec = ConstraintSpec("theta1", 3)
    est = estimate_width_mc(spec, (5, 6, 4), samples=30, seed=11)
    vals = []
    for child in np.random.SeedSequence(11).spawn(30):
        g = np.random.default_rng(child).standard_normal((5, 6, 4))
        sv = np.concatenate([np.linalg.svd(g[:, :, j], compute_uv=False) for j in range(4)])
        vals.append(float(np.sqrt(np.sum(np.sort(sv)[-3:] ** 2))))
    assert est.mean == pytest.approx(float(np.mean(vals)), rel=1e-12)


def test_estimates_sit_below_closed_form_caps():
    dims = (10, 10, 10)
    est2 = estimate_width_mc(ConstraintSpec("theta2", 2, 2), dims, samples=100)
    assert est2.mean + 2 * est2.std_error <= width_bound_theta2(10, 10, 10, 2, 2)
    est3 = estimate_width_mc(ConstraintSpec("theta3", 2), dims, samples=100)
    assert est3.kind == "lower-bound"
    assert est3.mean + 2 * est3.std_error <= width_bound_theta3(10, 10, 10, 2)


@pytest.mark.parametrize("kind", ["theta2", "theta3"])
def test_width_grows_with_rank_budget(kind):
    dims = (10, 10, 10)
    means = []
    for r in (1, 2, 4):
        spec = ConstraintSpec(kind, r, 3) if kind == "theta2" else ConstraintSpec(kind, r)
        est = estimate_width_mc(spec, dims, samples=80, seed=3)
        means.append((est.mean, est.std_error))
    for (lo, se_lo), (hi, se_hi) in zip(means, means[1:]):
        assert hi >= lo - 2 * (se_lo + se_hi)


def test_width_grows_with_sparsity_budget():
    dims = (10, 10, 10)
    means = [
        estimate_width_mc(ConstraintSpec("theta2", 2, s), dims, samples=80, seed=3)
        for s in (1, 3, 6)
    ]
    for lo, hi in zip(means, means[1:]):
        assert hi.mean >= lo.mean - 2 * (lo.std_error + hi.std_error)


def test_bound_formulas_against_hand_values():
    # sqrt(s r 6 (d1 + d2 + ln d3)) and sqrt(r 6 min_m (d_m + prod of others))
    assert width_bound_theta2(10, 10, 10, 2, 2) == pytest.approx(23.135730855796563, rel=1e-13)
    assert width_bound_theta2(3, 4, 5, 2, 1) == pytest.approx(10.1643128124438, rel=1e-13)
    assert width_bound_theta3(10, 10, 10, 2) == pytest.approx(36.3318042491699, rel=1e-13)
    assert width_bound_theta3(2, 3, 4, 1) == pytest.approx(7.745966692414834, rel=1e-13)


def test_bound_argument_validation():
    with pytest.raises(ArgumentError):
        width_bound_theta2(0, 10, 10, 1, 1)
    with pytest.raises(ArgumentError):
        width_bound_theta2(10, 10, 10, 0, 1)
    with pytest.raises(ArgumentError):
        width_bound_theta2(10, 10, 10, 1, 0)
    with pytest.raises(ArgumentError):
        width_bound_theta3(10, 10, 0, 1)
    with pytest.raises(ArgumentError):
        width_bound_theta3(10, 10, 10, 0)


def test_estimate_is_deterministic():
    spec = ConstraintSpec("theta3", 2)
    a = estimate_width_mc(spec, (6, 6, 6), samples=20, seed=5)
    b = estimate_width_mc(spec, (6, 6, 6), samples=20, seed=5)
    assert a == b
    c = estimate_width_mc(spec, (6, 6, 6), samples=20, seed=6)
    assert c.mean != a.mean


def test_estimate_argument_validation():
    spec = ConstraintSpec("theta2", 2, 2)
    with pytest.raises(ArgumentError):
        estimate_width_mc(spec, (10, 10, 10), samples=1)
    with pytest.raises(ArgumentError):
        estimate_width_mc(ConstraintSpec("theta2", 5, 2), (4, 4, 6), samples=10)
    with pytest.raises(ArgumentError):
        estimate_width_mc(ConstraintSpec("theta2", 2, 9), (4, 4, 6), samples=10)
