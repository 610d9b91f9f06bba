import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclicdiff.core import (
    PointCloud,
    ScaledState,
    center_sum,
    difference_matrix,
    evolve_binomial,
    evolve_iterative,
    normalize,
    relative_discrepancy,
    step,
)
from cyclicdiff.errors import DegenerateZero, StepsTooLarge
from cyclicdiff.rng import uniform_cloud


def exact_evolve(values, t):
    """Integer oracle: t cyclic differences in exact Python arithmetic."""
    cur = list(values)
    n = len(cur)
    for _ in range(t):
        cur = [cur[(l + 1) % n] - cur[l] for l in range(n)]
    return cur


clouds = st.tuples(st.integers(2, 64), st.integers(1, 3), st.integers(0, 2 ** 32))


# -- step -------------------------------------------------------------------

def test_step_zero_fixed_point():
    out = step(PointCloud([0.0, 0.0, 0.0]))
    assert not out.coords.any() and out.t == 1


def test_step_hand_examples():
    np.testing.assert_array_equal(step(PointCloud([1.0, 0.0, 0.0])).coords[:, 0], [-1, 0, 1])
    np.testing.assert_array_equal(step(PointCloud([1.0, 0.0])).coords[:, 0], [-1, 1])


def test_step_matches_dense_matrix():
    x = uniform_cloud(9, 2, 3)
    np.testing.assert_allclose(step(PointCloud(x)).coords, difference_matrix(9) @ x,
                               rtol=0, atol=1e-15)


def test_point_cloud_validation():
    with pytest.raises(ValueError):
        PointCloud([1.0])
    with pytest.raises(ValueError):
        PointCloud([[1.0, np.nan], [0.0, 0.0]])
    with pytest.raises(ValueError):
        PointCloud([1.0, 2.0], t=-1)
    c = PointCloud([1.0, 2.0])
    assert c.n == 2 and c.d == 1
    with pytest.raises(ValueError):
        c.coords[0, 0] = 5.0


# -- evolve_iterative ---------------------------------------------------------

def test_iterative_zero_steps_is_identity():
    x = uniform_cloud(7, 2, 1)
    s = evolve_iterative(PointCloud(x), 0)
    assert s.logmag == pytest.approx(math.log(np.linalg.norm(x)), abs=1e-15)
    np.testing.assert_allclose(s.true_coords(), x, rtol=1e-15)
    assert s.t == 0


def test_iterative_two_steps():
    s = evolve_iterative(PointCloud([1.0, 0.0, 0.0]), 2)
    np.testing.assert_allclose(s.true_coords()[:, 0], [1, 1, -2], rtol=1e-14)
    assert s.t == 2


@pytest.mark.parametrize("k", [1, 2, 3, 10, 100, 1023, 5000])
def test_iterative_n2_closed_form(k):
    # (-1)^k 2^(k-1) (1, -1); compared in log form because 2^5000 overflows
    s = evolve_iterative(PointCloud([1.0, 0.0]), k)
    assert s.logmag == pytest.approx((k - 1) * math.log(2) + 0.5 * math.log(2), rel=1e-13)
    expected = (-1) ** k * np.array([1.0, -1.0]) / math.sqrt(2)
    np.testing.assert_allclose(s.coords[:, 0], expected, rtol=1e-14)


def test_iterative_matches_integer_oracle():
    init = [3, -1, 4, 1, -5, 9, 2]
    for t in (1, 5, 17, 40):
        s = evolve_iterative(PointCloud(np.array(init, float)), t)
        exact = np.array(exact_evolve(init, t), dtype=float)
        assert relative_discrepancy(s, PointCloud(exact)) < 1e-13


def test_iterative_rescaling_keeps_unit_norm():
    s = evolve_iterative(PointCloud(uniform_cloud(12, 3, 4)), 3000)
    assert np.linalg.norm(s.coords) == pytest.approx(1.0, abs=1e-12)
    assert math.isfinite(s.logmag) and s.logmag > 2000
    np.testing.assert_allclose(np.linalg.norm(s.coords, axis=0), s.axis_norms)


def test_iterative_continues_from_scaled_state():
    x = PointCloud(uniform_cloud(10, 2, 8))
    once = evolve_iterative(x, 700)
    twice = evolve_iterative(evolve_iterative(x, 300), 400)
    assert twice.t == 700
    assert relative_discrepancy(twice, once) < 1e-12


def test_iterative_all_equal_points_degenerate():
    s = evolve_iterative(PointCloud(np.full((6, 2), 0.3)), 5)
    assert s.degenerate and s.logmag == -math.inf and s.t == 5
    assert not s.true_coords().any()


# -- evolve_binomial ----------------------------------------------------------

def test_binomial_hand_example():
    np.testing.assert_array_equal(evolve_binomial(PointCloud([1.0, 0.0, 0.0]), 2).coords[:, 0],
                                  [1, 1, -2])


def test_binomial_zero_steps_identity():
    x = uniform_cloud(5, 2, 2)
    np.testing.assert_array_equal(evolve_binomial(PointCloud(x), 0).coords, x)


def test_binomial_matches_iterative_n4():
    x = PointCloud(uniform_cloud(4, 1, 99))
    assert relative_discrepancy(evolve_binomial(x, 5), evolve_iterative(x, 5)) < 1e-12


def test_binomial_matches_dense_matrix_power():
    x = uniform_cloud(6, 2, 17)
    expected = np.linalg.matrix_power(difference_matrix(6), 13) @ x
    np.testing.assert_allclose(evolve_binomial(PointCloud(x), 13).coords, expected,
                               rtol=1e-12, atol=1e-12 * np.abs(expected).max())


def test_binomial_integer_input_exact_to_56():
    init = [2, -7, 1, 8, 0, -3, 5, 4, -1, 6, 3]
    for t in (30, 56):
        got = evolve_binomial(PointCloud(np.array(init, float)), t).coords[:, 0]
        exact = exact_evolve(init, t)
        assert all(abs(g - e) <= abs(e) * 2 ** -50 for g, e in zip(got, exact))


def test_binomial_cap():
    x = PointCloud([1.0, 2.0, 3.0])
    evolve_binomial(x, 60)
    with pytest.raises(StepsTooLarge):
        evolve_binomial(x, 61)


# -- center_sum / normalize ---------------------------------------------------

def test_center_sum_examples():
    assert center_sum(PointCloud([1.0, 0.0, 0.0]))[0] == 1.0
    assert center_sum(PointCloud(np.zeros((4, 2)))).tolist() == [0.0, 0.0]


def test_normalize_pythagorean():
    s = normalize(PointCloud([3.0, 4.0]))
    np.testing.assert_allclose(s.coords[:, 0], [0.6, 0.8], rtol=1e-15)
    assert s.logmag == pytest.approx(math.log(5.0), abs=1e-15)


def test_normalize_idempotent_on_unit_state():
    s = normalize(PointCloud([0.6, 0.8]))
    np.testing.assert_array_equal(s.coords[:, 0], [0.6, 0.8])
    assert s.logmag == 0.0


def test_normalize_zero_raises():
    with pytest.raises(DegenerateZero):
        normalize(PointCloud([0.0, 0.0]))


def test_per_axis_normalization():
    s = normalize(PointCloud([[1.0, 10.0], [2.0, -20.0], [2.0, 0.0]]))
    per_axis = s.per_axis_normalized()
    np.testing.assert_allclose(np.linalg.norm(per_axis, axis=0), [1.0, 1.0])
    np.testing.assert_allclose(per_axis[:, 0], np.array([1, 2, 2]) / 3.0)


# -- properties ---------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(clouds, st.integers(1, 300))
def test_sum_zero_after_one_step(cfg, t):
    n, d, seed = cfg
    s = evolve_iterative(PointCloud(uniform_cloud(n, d, seed)), t)
    assert np.all(np.abs(center_sum(s.cloud)) <= 1e-12)


@settings(max_examples=60, deadline=None)
@given(clouds, st.integers(0, 20), st.floats(-3, 3))
def test_linearity(cfg, t, c):
    n, d, seed = cfg
    x, y = uniform_cloud(n, d, seed), uniform_cloud(n, d, seed + 1)
    lhs = evolve_iterative(PointCloud(c * x + y), t).true_coords()
    rhs = (c * evolve_iterative(PointCloud(x), t).true_coords()
           + evolve_iterative(PointCloud(y), t).true_coords())
    assert np.linalg.norm(lhs - rhs) <= 1e-10 * max(np.linalg.norm(rhs), 1e-300) + 1e-300


@settings(max_examples=60, deadline=None)
@given(clouds)
def test_shift_equivariance(cfg):
    n, d, seed = cfg
    x = PointCloud(uniform_cloud(n, d, seed))
    rotated = PointCloud(np.roll(x.coords, -1, axis=0))
    np.testing.assert_array_equal(step(rotated).coords, np.roll(step(x).coords, -1, axis=0))


@settings(max_examples=60, deadline=None)
@given(clouds, st.integers(0, 30))
def test_binomial_equals_iterative(cfg, t):
    n, d, seed = cfg
    x = PointCloud(uniform_cloud(n, d, seed))
    assert relative_discrepancy(evolve_binomial(x, t), evolve_iterative(x, t)) <= 1e-9


@settings(max_examples=30, deadline=None)
@given(clouds, st.integers(0, 200))
def test_axes_evolve_independently(cfg, t):
    n, d, seed = cfg
    x = uniform_cloud(n, d, seed)
    joint = evolve_iterative(PointCloud(x), t).true_coords()
    for a in range(d):
        alone = evolve_iterative(PointCloud(x[:, a]), t)
        if alone.degenerate:
            continue
        np.testing.assert_allclose(joint[:, a], alone.true_coords()[:, 0], rtol=1e-9,
                                   atol=1e-9 * np.abs(joint).max())


def test_scaled_state_repr_and_fields():
    s = evolve_iterative(PointCloud(uniform_cloud(5, 2, 0)), 3)
    assert isinstance(s, ScaledState) and "t=3" in repr(s)
