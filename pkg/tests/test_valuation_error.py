import pytest

from functional_valuations import (
    AdmissibilityError,
    ArgumentError,
    ClippingError,
    ConfigError,
    ConvexityError,
    CoverageError,
    DomainError,
    SuiteNotFoundError,
    UnsupportedRepresentationError,
    ValuationError,
)


def test_message_only():
    error = ValuationError("something went wrong")

    assert error.message == "something went wrong"
    assert error.detail == {}
    assert str(error) == "something went wrong"


def test_detail_is_rendered_sorted():
    error = ArgumentError("bad factor", detail={"lambda": -1.0, "action": "scale"})

    assert str(error) == "bad factor (action='scale', lambda=-1.0)"


def test_detail_is_copied():
    detail = {"dim": 4}
    error = DomainError("dimension must be 1, 2 or 3", detail=detail)
    detail["dim"] = 5

    assert error.detail == {"dim": 4}


@pytest.mark.parametrize(
    "cls",
    [
        DomainError,
        ConvexityError,
        CoverageError,
        ClippingError,
        AdmissibilityError,
        UnsupportedRepresentationError,
        ArgumentError,
        SuiteNotFoundError,
        ConfigError,
    ],
)
def test_every_error_is_a_valuation_error(cls):
    with pytest.raises(ValuationError) as info:
        raise cls("failure", detail={"key": 1})

    assert info.value.detail == {"key": 1}
