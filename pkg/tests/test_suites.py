import math

import numpy as np
import pytest

from functional_valuations import SuiteConfig, SuiteNotFoundError, load_config
from functional_valuations.config import SUITE_NAMES
from functional_valuations.suites import (
    SUITES,
    Case,
    CaseOutcome,
    build_cases,
    get_suite,
    suite_rng,
)

SMALL = {"cases": 1, "resolution": 33, "samples": 8}


@pytest.fixture(scope="module")
def operators():
    return load_config().operators


def small_config(name, operators, *, dims=(1,), seed=7):
    return SuiteConfig(name, dims=list(dims), seed=seed, operators=operators, override=SMALL)


def test_registry_matches_suite_names():
    assert tuple(SUITES) == SUITE_NAMES


def test_unknown_suite():
    with pytest.raises(SuiteNotFoundError) as exc_info:
        get_suite("associativity")

    assert exc_info.value.detail["suite"] == "associativity"
    assert "simplicity" in exc_info.value.detail["known"]


def test_suite_rng_depends_on_seed_and_suite(operators):
    first = suite_rng(small_config("homogeneity", operators)).random(4)
    again = suite_rng(small_config("homogeneity", operators)).random(4)
    other_suite = suite_rng(small_config("simplicity", operators)).random(4)
    other_seed = suite_rng(small_config("homogeneity", operators, seed=8)).random(4)

    np.testing.assert_array_equal(first, again)
    assert not np.array_equal(first, other_suite)
    assert not np.array_equal(first, other_seed)


def test_case_outcome_stores_absolute_error():
    outcome = CaseOutcome(0.25, -0.5, note="n")

    assert outcome.raw_residual == 0.25
    assert outcome.error_estimate == 0.5
    assert outcome.note == "n"


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_build_cases_is_deterministic(name, operators):
    first = build_cases(small_config(name, operators))
    second = build_cases(small_config(name, operators))

    assert len(first) > 0
    assert all(isinstance(case, Case) for case in first)
    assert [c.inputs for c in first] == [c.inputs for c in second]
    assert [c.pathway for c in first] == [c.pathway for c in second]


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_checks_run_in_one_dimension(name, operators):
    for case in build_cases(small_config(name, operators)):
        outcome = case.check()

        assert isinstance(outcome, CaseOutcome)
        assert outcome.error_estimate >= 0.0
        assert not math.isnan(outcome.raw_residual)


def test_vertical_invariance_holds(operators):
    config = small_config("vertical_invariance", operators, dims=(1, 2))

    for case in build_cases(config):
        outcome = case.check()
        if case.pathway == "exact":
            assert abs(outcome.raw_residual) <= 1e-9
        else:
            assert abs(outcome.raw_residual) - outcome.error_estimate <= 1e-9


def test_degree0_constancy_holds(operators):
    config = small_config("degree0_constancy", operators, dims=(1, 2))

    for case in build_cases(config):
        assert case.check().raw_residual <= 1e-9


def test_reflection_witness_is_visible(operators):
    config = small_config("rotation_equivariance", operators, dims=(2,))
    witness = [c for c in build_cases(config) if c.inputs.get("check") == "reflection_witness"]

    assert len(witness) == 1
    outcome = witness[0].check()
    assert outcome.raw_residual == 0.0
    assert outcome.note == "reflection violation 1"


def test_steiner_worked_example(operators):
    config = small_config("steiner_consistency", operators)
    worked = [c for c in build_cases(config) if c.inputs.get("check") == "worked_example"]

    assert len(worked) == 1
    assert worked[0].check().raw_residual <= 1e-6


def test_operator_cases_name_their_operator(operators):
    config = small_config("homogeneity", operators)
    labels = {c.inputs["operator"] for c in build_cases(config)}

    assert "m_hat" in labels
    assert "V0_hat" in labels
    # the rotation-field operator only exists in the plane
    assert "so2_quarter_turn" not in labels


def test_exact_cases_only_use_exact_capable_operators(operators):
    config = small_config("valuation_identity", operators, dims=(2,))
    exact_capable = {op.label for op in operators if op.exact_capable(2)}

    for case in build_cases(config):
        if case.pathway == "exact":
            assert case.inputs["operator"] in exact_capable


def test_grid_rotations_are_not_grid_symmetries(operators):
    config = small_config("rotation_equivariance", operators, dims=(2,))
    grid_cases = [c for c in build_cases(config) if c.pathway == "grid"]

    assert {c.inputs["rotation"] for c in grid_cases} == {"proper", "improper"}
    for case in grid_cases:
        theta = case.check.args[2]
        np.testing.assert_allclose(theta @ theta.T, np.eye(2), atol=1e-12)
        # a signed permutation would map grid nodes onto grid nodes
        assert np.any(np.abs(np.abs(theta) - np.round(np.abs(theta))) > 1e-6)
        assert not math.isnan(case.check().raw_residual)


def mixed_second_difference(values):
    return values[2:, 2:] - values[2:, :-2] - values[:-2, 2:] + values[:-2, :-2]


@pytest.mark.parametrize(
    "name, key, value, position",
    [
        ("minkowski_relations", "relation", "t(h_K)", 1),
        ("steiner_consistency", "check", "endpoint", 0),
        ("conjugation_duality", "check", "moment", 0),
    ],
)
def test_grid_bodies_are_not_boxes(name, key, value, position, operators):
    config = small_config(name, operators, dims=(2,), seed=11)
    bodies = [
        c.check.args[position]
        for c in build_cases(config)
        if c.pathway == "grid" and c.inputs.get(key) == value
    ]

    assert bodies
    for h_grid in bodies:
        # support functions of boxes are separable
        assert np.abs(mixed_second_difference(np.asarray(h_grid.values))).max() > 1e-6


def test_grid_support_functions_are_mollified(operators):
    config = small_config("minkowski_relations", operators, dims=(2,))
    grid_cases = [c for c in build_cases(config) if c.pathway == "grid"]

    assert grid_cases
    assert all(c.check.keywords["smooth"] for c in grid_cases)
