"""
Property report documents.

The pydantic models here are the report schema: every report is validated
against ``PropertyReport`` before it is written, and ``report_schema``
returns the JSON schema the CLI publishes.
"""

import csv
import json
import logging
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Literal

logger = logging.getLogger(__name__)

CasePathway = Literal["exact", "grid", "monte_carlo"]
ReportFormat = Literal["json", "csv"]

CSV_COLUMNS = [
    "index",
    "dim",
    "pathway",
    "raw_residual",
    "error_estimate",
    "residual",
    "inputs",
    "note",
]


class CaseRecord(BaseModel):
    """
    One checked case.

    ``residual`` equals ``raw_residual`` on the exact pathway and the part
    of ``raw_residual`` exceeding ``error_estimate`` otherwise.
    """

    model_config = ConfigDict(ser_json_inf_nan="constants")

    index: int
    dim: int
    pathway: CasePathway
    inputs: Dict[str, Any]
    raw_residual: float
    error_estimate: float = Field(ge=0.0)
    residual: float = Field(ge=0.0)
    note: Optional[str] = None


class PropertyReport(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants", populate_by_name=True)

    suite: str
    seed: int
    resolution: Optional[int] = None
    case_count: int
    max_residual: float
    tolerance: float
    passed: bool = Field(alias="pass")
    cases: List[CaseRecord]
    generated_at: Optional[str] = None

    @model_validator(mode="after")
    def _consistent(self) -> "PropertyReport":
        if self.case_count != len(self.cases):
            raise ValueError("case_count does not match the case list")
        worst = max((c.residual for c in self.cases), default=0.0)
        both_nan = math.isnan(worst) and math.isnan(self.max_residual)
        if not (worst == self.max_residual or both_nan):
            raise ValueError("max_residual does not match the case residuals")
        if self.passed != (self.max_residual <= self.tolerance):
            raise ValueError("pass flag must equal max_residual <= tolerance")
        return self


def make_case(
    *,
    index: int,
    dim: int,
    pathway: CasePathway,
    inputs: Dict[str, Any],
    raw_residual: float,
    error_estimate: float = 0.0,
    note: Optional[str] = None,
) -> CaseRecord:
    raw = float(raw_residual)
    estimate = abs(float(error_estimate))
    if math.isnan(raw):
        residual = math.inf
    elif pathway == "exact":
        residual = abs(raw)
    else:
        residual = max(0.0, abs(raw) - estimate)
    return CaseRecord(
        index=index,
        dim=dim,
        pathway=pathway,
        inputs=inputs,
        raw_residual=raw,
        error_estimate=estimate,
        residual=residual,
        note=note,
    )


def build_report(
    *,
    suite: str,
    seed: int,
    tolerance: float,
    cases: List[CaseRecord],
    resolution: Optional[int] = None,
    timestamp: bool = True,
) -> PropertyReport:
    ordered = sorted(cases, key=lambda c: c.index)
    worst = max((c.residual for c in ordered), default=0.0)
    return PropertyReport(
        suite=suite,
        seed=seed,
        resolution=resolution,
        case_count=len(ordered),
        max_residual=worst,
        tolerance=tolerance,
        passed=worst <= tolerance,
        cases=ordered,
        generated_at=datetime.now(timezone.utc).isoformat() if timestamp else None,
    )


def report_schema() -> Dict[str, Any]:
    return PropertyReport.model_json_schema(by_alias=True)


def comparable(report: PropertyReport) -> Dict[str, Any]:
    """Report content without the timestamp, for reproducibility checks."""
    return report.model_dump(mode="json", by_alias=True, exclude={"generated_at"})


def dump_report(report: PropertyReport) -> str:
    return report.model_dump_json(by_alias=True, indent=2)


def load_report(text: str) -> PropertyReport:
    return PropertyReport.model_validate_json(text)


def write_report(report: PropertyReport, path: Path, *, fmt: ReportFormat = "json") -> Path:
    """Validate ``report`` against the schema and write it as JSON or CSV."""
    PropertyReport.model_validate(report.model_dump(by_alias=True))
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path.write_text(dump_report(report) + "\n", encoding="utf-8")
    else:
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_COLUMNS)
            for case in report.cases:
                writer.writerow(
                    [
                        case.index,
                        case.dim,
                        case.pathway,
                        repr(case.raw_residual),
                        repr(case.error_estimate),
                        repr(case.residual),
                        json.dumps(case.inputs, sort_keys=True),
                        case.note or "",
                    ]
                )
    logger.info("wrote %s report for %s to %s", fmt, report.suite, path)
    return path
