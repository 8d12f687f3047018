import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from functional_valuations import (
    DomainError,
    FunctionSpec,
    GridFunction,
    MaxAffineFunction,
    UnsupportedRepresentationError,
    build_function,
    evaluate,
)


def build(document):
    return build_function(FunctionSpec.model_validate(document))


class TestExactSpecs:
    def test_max_affine(self):
        v = build(
            {
                "dim": 1,
                "function": {
                    "kind": "max_affine",
                    "slopes": [[-1.0], [1.0]],
                    "offsets": [0.0, 0.0],
                },
            }
        )

        assert isinstance(v, MaxAffineFunction)
        assert evaluate(v, [-2.0]) == 2.0

    def test_sum_of_support_and_linear(self):
        v = build(
            {
                "dim": 2,
                "function": {
                    "kind": "sum",
                    "terms": [
                        {"kind": "support", "vertices": [[-1, -1], [1, -1], [1, 1], [-1, 1]]},
                        {"kind": "linear", "slope": [0.5, 0.0], "offset": 1.0},
                    ],
                },
            }
        )

        assert isinstance(v, MaxAffineFunction)
        assert evaluate(v, [1.0, 1.0]) == pytest.approx(3.5)

    def test_forced_grid(self):
        v = build(
            {
                "dim": 1,
                "function": {"kind": "linear", "slope": [1.0]},
                "representation": "grid",
                "grid": {"half_width": 1.0, "resolution": 5},
            }
        )

        assert isinstance(v, GridFunction)
        assert_allclose(v.values, [-1.0, -0.5, 0.0, 0.5, 1.0])


class TestGridSpecs:
    def test_quadratic(self):
        v = build({"dim": 2, "function": {"kind": "quadratic", "center": [1.0, 0.0]}})

        assert isinstance(v, GridFunction)
        assert v.resolution == (129, 129)
        assert evaluate(v, [1.0, 0.0]) == pytest.approx(0.0)

    def test_sum_with_a_smooth_term_is_sampled(self):
        v = build(
            {
                "dim": 1,
                "function": {
                    "kind": "sum",
                    "terms": [
                        {"kind": "radial_power", "power": 2.0, "coefficient": 0.5},
                        {"kind": "max_affine", "slopes": [[0.0], [1.0]], "offsets": [0.0, -1.0]},
                    ],
                },
                "grid": {"resolution": 9},
            }
        )

        assert isinstance(v, GridFunction)
        assert evaluate(v, [2.0]) == pytest.approx(3.0)

    def test_exact_request_for_a_smooth_function(self):
        with pytest.raises(UnsupportedRepresentationError):
            build({"dim": 1, "function": {"kind": "quadratic"}, "representation": "exact"})


class TestInvalidSpecs:
    @pytest.mark.parametrize(
        "document",
        [
            {"dim": 4, "function": {"kind": "linear", "slope": [1, 0, 0, 0]}},
            {"dim": 2, "function": {"kind": "quadratic", "center": [1.0]}},
            {
                "dim": 1,
                "function": {"kind": "max_affine", "slopes": [[1.0]], "offsets": [0.0, 1.0]},
            },
        ],
    )
    def test_domain_errors(self, document):
        with pytest.raises(DomainError):
            build(document)

    @pytest.mark.parametrize(
        "document",
        [
            {"dim": 1, "function": {"kind": "radial_power", "power": 0.5}},
            {"dim": 1, "function": {"kind": "spline"}},
            {"dim": 1, "function": {"kind": "sum", "terms": []}},
            {"dim": 1, "function": {"kind": "quadratic"}, "grid": {"resolution": 2}},
            {"dim": 1, "function": {"kind": "quadratic", "coefficient": -1.0}},
        ],
    )
    def test_schema_errors(self, document):
        with pytest.raises(ValidationError):
            FunctionSpec.model_validate(document)
