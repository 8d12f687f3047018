import asyncio
import logging
import time
from concurrent.futures import Executor
from typing import List, Optional, Union

import numpy as np
from scipy.spatial import QhullError

from .config import LoadedConfig, SuiteConfig, SuiteOptions, suite_configs
from .report import CaseRecord, PropertyReport, build_report, make_case
from .suites import Case, CaseOutcome, build_cases, get_suite
from .valuation_error import SuiteNotFoundError, ValuationError

logger = logging.getLogger(__name__)

SuiteSource = Union[SuiteConfig, LoadedConfig]

CASE_ERRORS = (ValuationError, QhullError, np.linalg.LinAlgError)
"""Errors recorded on the failing case instead of aborting the suite."""


class BaseRunner:
    """Shared case bookkeeping for the synchronous and asynchronous runners.

    Attributes:
        timestamp: whether reports carry ``generated_at``
    """

    def __init__(self, *, timestamp: bool = True) -> None:
        self.timestamp = timestamp

    def resolve(
        self,
        name: str,
        source: SuiteSource,
        *,
        seed: Optional[int] = None,
        override: Optional[SuiteOptions] = None,
    ) -> SuiteConfig:
        """The merged ``SuiteConfig`` for ``name``."""
        get_suite(name)
        if isinstance(source, SuiteConfig):
            if source.name != name:
                raise SuiteNotFoundError(
                    "suite config belongs to another suite",
                    detail={"suite": name, "config": source.name},
                )
            return source
        # with several configured resolutions the first one runs unless overridden
        config = suite_configs(source.config, source.operators, only=[name], seed=seed)[0]
        if override:
            config = SuiteConfig(
                name,
                dims=config.dims,
                seed=config.seed,
                operators=config.operators,
                box_half_width=config.box_half_width,
                base={
                    "cases": config.cases,
                    "tolerance": config.tolerance,
                    "resolution": config.resolution,
                    "samples": config.samples,
                },
                override=override,
            )
        return config

    def run_case(self, index: int, case: Case) -> CaseRecord:
        """Run one check; errors in ``CASE_ERRORS`` become an infinite residual."""
        try:
            outcome = case.check()
        except CASE_ERRORS as exc:
            logger.warning("case %d (%s) raised %s", index, case.inputs, exc)
            outcome = CaseOutcome(np.nan, note=f"{type(exc).__name__}: {exc}")
        return make_case(
            index=index,
            dim=case.dim,
            pathway=case.pathway,
            inputs=case.inputs,
            raw_residual=outcome.raw_residual,
            error_estimate=outcome.error_estimate,
            note=outcome.note,
        )

    def finish(
        self, config: SuiteConfig, records: List[CaseRecord], started: float
    ) -> PropertyReport:
        report = build_report(
            suite=config.name,
            seed=config.seed,
            tolerance=config.tolerance,
            cases=records,
            resolution=config.resolution,
            timestamp=self.timestamp,
        )
        logger.info(
            "suite %s: %d cases, max residual %.3g (tolerance %.3g) %s in %.1fs",
            config.label,
            report.case_count,
            report.max_residual,
            report.tolerance,
            "passed" if report.passed else "FAILED",
            time.perf_counter() - started,
        )
        return report


class SyncRunner(BaseRunner):
    """Runs the cases of a suite one after the other."""

    def run(self, config: SuiteConfig) -> PropertyReport:
        started = time.perf_counter()
        cases = build_cases(config)
        records = [self.run_case(index, case) for index, case in enumerate(cases)]
        return self.finish(config, records, started)


class AsyncRunner(BaseRunner):
    """
    Runs the cases of a suite concurrently in an executor. Inputs are generated
    before any check starts, so the report equals the synchronous one.
    """

    def __init__(self, *, executor: Optional[Executor] = None, timestamp: bool = True) -> None:
        super().__init__(timestamp=timestamp)
        self.executor = executor

    async def run(self, config: SuiteConfig) -> PropertyReport:
        started = time.perf_counter()
        loop = asyncio.get_running_loop()
        cases = await loop.run_in_executor(self.executor, build_cases, config)
        records = await asyncio.gather(
            *(
                loop.run_in_executor(self.executor, self.run_case, index, case)
                for index, case in enumerate(cases)
            )
        )
        return self.finish(config, list(records), started)


def run_suite(
    name: str,
    config: SuiteSource,
    *,
    seed: Optional[int] = None,
    override: Optional[SuiteOptions] = None,
    timestamp: bool = True,
) -> PropertyReport:
    """
    Run the property suite ``name`` and return its report.

    Raises ``SuiteNotFoundError`` for unknown names. Errors raised while
    checking a case are recorded on that case, not propagated.
    """
    runner = SyncRunner(timestamp=timestamp)
    return runner.run(runner.resolve(name, config, seed=seed, override=override))


async def run_suite_async(
    name: str,
    config: SuiteSource,
    *,
    seed: Optional[int] = None,
    override: Optional[SuiteOptions] = None,
    executor: Optional[Executor] = None,
    timestamp: bool = True,
) -> PropertyReport:
    """Asynchronous ``run_suite``; the report is identical apart from ``generated_at``."""
    runner = AsyncRunner(executor=executor, timestamp=timestamp)
    return await runner.run(runner.resolve(name, config, seed=seed, override=override))
