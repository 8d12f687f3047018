import json
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from scipy.spatial import QhullError

from functional_valuations import (
    DomainError,
    SuiteConfig,
    SuiteNotFoundError,
    load_config,
    run_suite,
    run_suite_async,
)
from functional_valuations.report import comparable
from functional_valuations.runner import AsyncRunner, SyncRunner
from functional_valuations.suites import Case, CaseOutcome

SMALL = {"cases": 1, "resolution": 33, "samples": 8}


@pytest.fixture(scope="module")
def loaded():
    return load_config()


@pytest.fixture
def small_loaded(tmp_path):
    document = {
        "dims": [1],
        "suites": ["vertical_invariance"],
        "densities": [{"name": "hat", "kind": "alpha", "family": "hat"}],
        "operators": [{"family": "m_alpha", "density": "hat", "label": "m_hat"}],
        "resolutions": [33],
        "cases": {"vertical_invariance": 2},
        "seed": 5,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return load_config(path)


def test_run_from_loaded_config(small_loaded):
    report = run_suite("vertical_invariance", small_loaded)

    assert report.suite == "vertical_invariance"
    assert report.seed == 5
    assert report.resolution == 33
    # two cases per input: max-affine and grid
    assert report.case_count == 4
    assert report.passed
    assert report.generated_at is not None


def test_seed_override(small_loaded):
    report = run_suite("vertical_invariance", small_loaded, seed=11)

    assert report.seed == 11


def test_override_is_applied(small_loaded):
    report = run_suite("vertical_invariance", small_loaded, override={"cases": 1})

    assert report.case_count == 2
    assert all(c.inputs.get("resolution", [33]) == [33] for c in report.cases)


def test_first_resolution_runs_unless_overridden(tmp_path):
    document = {
        "dims": [1],
        "suites": ["vertical_invariance"],
        "densities": [{"name": "hat", "kind": "alpha", "family": "hat"}],
        "operators": [{"family": "m_alpha", "density": "hat"}],
        "resolutions": [33, 65],
        "cases": {"vertical_invariance": 1},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    multi = load_config(path)

    assert run_suite("vertical_invariance", multi).resolution == 33
    report = run_suite("vertical_invariance", multi, override={"resolution": 65})
    assert report.resolution == 65


def test_suite_not_listed_runs_with_run_settings(small_loaded):
    report = run_suite("degree0_constancy", small_loaded, timestamp=False)

    assert report.suite == "degree0_constancy"
    assert report.case_count > 0
    assert report.passed


def test_run_from_suite_config(loaded):
    config = SuiteConfig(
        "vertical_invariance", dims=[1], seed=3, operators=loaded.operators, override=SMALL
    )

    report = run_suite("vertical_invariance", config, timestamp=False)

    assert report.seed == 3
    assert report.generated_at is None
    assert report.passed


def test_suite_config_for_another_suite(loaded):
    config = SuiteConfig("homogeneity", dims=[1], seed=3, operators=loaded.operators)

    with pytest.raises(SuiteNotFoundError):
        run_suite("vertical_invariance", config)


def test_unknown_suite(loaded):
    with pytest.raises(SuiteNotFoundError):
        run_suite("commutativity", loaded)


def test_case_error_becomes_infinite_residual():
    def broken():
        raise DomainError("outside the grid")

    case = Case(dim=1, pathway="grid", inputs={"label": "broken"}, check=broken)

    record = SyncRunner().run_case(3, case)

    assert record.index == 3
    assert math.isnan(record.raw_residual)
    assert record.residual == math.inf
    assert record.note == "DomainError: outside the grid"


@pytest.mark.parametrize(
    "error, name",
    [
        (QhullError("QH6154 initial simplex is flat"), "QhullError"),
        (np.linalg.LinAlgError("Singular matrix"), "LinAlgError"),
    ],
)
def test_numerical_error_becomes_infinite_residual(error, name):
    def broken():
        raise error

    case = Case(dim=2, pathway="exact", inputs={}, check=broken)

    record = SyncRunner().run_case(0, case)

    assert record.residual == math.inf
    assert record.note.startswith(f"{name}: ")


def test_other_errors_propagate():
    def broken():
        raise KeyError("missing")

    with pytest.raises(KeyError):
        SyncRunner().run_case(0, Case(dim=1, pathway="exact", inputs={}, check=broken))


def test_case_outcome_is_recorded():
    case = Case(
        dim=2,
        pathway="grid",
        inputs={},
        check=lambda: CaseOutcome(0.3, 0.1, note="ok"),
    )

    record = SyncRunner().run_case(0, case)

    assert record.dim == 2
    assert record.residual == pytest.approx(0.2)
    assert record.note == "ok"


def test_failing_suite_reports_failure(loaded):
    config = SuiteConfig(
        "vertical_invariance",
        dims=[1],
        seed=3,
        operators=loaded.operators,
        override={**SMALL, "tolerance": -1.0},
    )

    report = SyncRunner(timestamp=False).run(config)

    assert not report.passed
    assert report.max_residual > report.tolerance


@pytest.mark.asyncio
async def test_async_matches_sync(loaded):
    config = SuiteConfig(
        "homogeneity", dims=[1], seed=9, operators=loaded.operators, override=SMALL
    )

    sync_report = run_suite("homogeneity", config)
    async_report = await run_suite_async("homogeneity", config)

    assert comparable(async_report) == comparable(sync_report)


@pytest.mark.asyncio
async def test_async_runner_with_executor(loaded):
    config = SuiteConfig(
        "vertical_invariance", dims=[1, 2], seed=1, operators=loaded.operators, override=SMALL
    )

    with ThreadPoolExecutor(max_workers=4) as executor:
        report = await AsyncRunner(executor=executor, timestamp=False).run(config)

    assert [c.index for c in report.cases] == list(range(report.case_count))
    assert comparable(report) == comparable(SyncRunner(timestamp=False).run(config))
