import numpy as np
import pytest
from numpy.testing import assert_allclose

from functional_valuations import GridFunction, MaxAffineFunction, gen_valid_pairs
from functional_valuations.generators import (
    hinge,
    quadratic_function,
    random_max_affine,
    random_polytope,
    random_rotation,
    simple_function,
    simple_max_affine,
)


@pytest.mark.parametrize("dim", [1, 2, 3])
@pytest.mark.parametrize("proper", [True, False])
def test_random_rotation(dim, proper):
    q = random_rotation(np.random.default_rng(3), dim, proper=proper)

    assert_allclose(q.T @ q, np.eye(dim), atol=1e-12)
    assert np.linalg.det(q) == pytest.approx(1.0 if proper else -1.0)


def test_random_bodies_are_full_dimensional():
    rng = np.random.default_rng(11)

    assert random_polytope(rng, 3).is_full_dimensional
    assert random_max_affine(rng, 2).slope_hull().is_full_dimensional


def test_hinge():
    h = hinge([2.0], [0.5])

    assert_allclose(h([[0.0], [1.0]]), [0.0, 1.0])


def test_quadratic_function():
    f = quadratic_function(np.diag([1.0, 2.0]), [1.0, 0.0], cubic=1.0)

    assert_allclose(f(np.array([[1.0, 1.0]])), [1.5 + 1.0 + 8.0])


def test_simple_function_is_affine_in_one_dimension():
    func, y = simple_function(np.random.default_rng(5), 1)
    x = np.array([[-1.0], [0.0], [1.0]])
    values = func(x)

    assert values[2] - values[1] == pytest.approx(y[0])
    assert values[1] - values[0] == pytest.approx(y[0])


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_simple_max_affine_is_affine_across_x1(dim):
    v = simple_max_affine(np.random.default_rng(8), dim)
    drift = v.slopes - v.slopes[0]

    if dim == 1:
        assert len(v) == 1
    assert_allclose(drift[:, 1:], 0.0, atol=1e-15)


class TestValidPairs:
    @pytest.mark.parametrize("dim", [1, 2])
    def test_exact_pairs(self, dim):
        pairs = gen_valid_pairs(17, 5, dim, "exact")
        points = np.random.default_rng(0).uniform(-2.0, 2.0, size=(50, dim))

        assert [p.witness for p in pairs] == ["hinge"] * 4 + ["dominated"]
        for pair in pairs:
            assert isinstance(pair.join, MaxAffineFunction)
            v, w = pair.v(points), pair.w(points)
            assert_allclose(pair.join(points), np.maximum(v, w), atol=1e-12)
            assert_allclose(pair.meet(points), np.minimum(v, w), atol=1e-12)

    def test_grid_pairs(self):
        pairs = gen_valid_pairs(17, 5, 2, "grid", resolution=33)

        for pair in pairs:
            assert isinstance(pair.join, GridFunction)
            assert_allclose(pair.join.values, np.maximum(pair.v.values, pair.w.values))
            assert_allclose(pair.meet.values, np.minimum(pair.v.values, pair.w.values))
            rebuilt = pair.join.source(pair.join.nodes()).reshape(pair.join.resolution)
            assert_allclose(rebuilt, pair.join.values, atol=1e-12)

    def test_reproducible(self):
        first = gen_valid_pairs(99, 3, 2, "exact")
        second = gen_valid_pairs(99, 3, 2, "exact")

        for a, b in zip(first, second):
            assert np.array_equal(a.v.slopes, b.v.slopes)
            assert np.array_equal(a.w.offsets, b.w.offsets)
