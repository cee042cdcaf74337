"""
Report Export - Certification Reports

Structured (pydantic) certification reports, their JSON schema, and a
Markdown rendering for human readers.
"""

import json
import logging
import math
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

TOOL_NAME = "numra"
TOOL_VERSION = "0.2.0"

logger = logging.getLogger(__name__)


class ConditionEntry(BaseModel):
    """One verified condition: pass iff max_deviation <= tolerance."""

    model_config = ConfigDict(extra="forbid")

    name: str
    anchor: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    max_deviation: float
    tolerance: float
    passed: bool = False
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="before")
    @classmethod
    def _derive_passed(cls, data: Any) -> Any:
        if isinstance(data, dict) and "max_deviation" in data and "tolerance" in data:
            data = dict(data)
            deviation = float(data["max_deviation"])
            data["passed"] = bool(math.isfinite(deviation) and deviation <= float(data["tolerance"]))
        return data


class RunParameters(BaseModel):
    """Everything needed to rerun a certification bit-for-bit."""

    model_config = ConfigDict(extra="forbid")

    N: int
    r: int
    bank: Optional[str] = None
    omega: float
    step: float
    n_max: int
    j_lo: int
    j_hi: int
    lambda_window: int
    seed: int
    cascade_depth: int
    signal_count: int


class CertificationReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tool: str = TOOL_NAME
    version: str = TOOL_VERSION
    spectrum: Dict[str, int]
    parameters: RunParameters
    seed: int
    conditions: List[ConditionEntry] = Field(default_factory=list)
    complete: bool = False
    passed: bool = False
    wall_time_s: float = 0.0
    error: Optional[Dict[str, Any]] = None

    def add(self, entry: ConditionEntry) -> ConditionEntry:
        self.conditions.append(entry)
        return entry

    def finalize(self, complete: bool, wall_time_s: float) -> "CertificationReport":
        self.complete = complete
        self.wall_time_s = wall_time_s
        self.passed = complete and all(entry.passed for entry in self.conditions)
        return self

    def deviations(self) -> Dict[str, float]:
        return {entry.name: entry.max_deviation for entry in self.conditions}

    def entry(self, name: str) -> ConditionEntry:
        for candidate in self.conditions:
            if candidate.name == name:
                return candidate
        raise KeyError(name)


def report_schema() -> Dict[str, Any]:
    """JSON schema of the certification report, as shipped in schema/."""
    schema = CertificationReport.model_json_schema()
    schema["$schema"] = "https://json-schema.org/draft/2020-12/schema"
    schema["title"] = "CertificationReport"
    return schema


class ReportWriter:
    """
    Renders certification reports.

    JSON is the machine-readable form; the Markdown summary is for people
    reading a run log or a pull request.
    """

    def to_json(self, report: CertificationReport) -> str:
        return report.model_dump_json(indent=2)

    def write_markdown(self, report: CertificationReport) -> str:
        report_sections = []

        spectrum = report.spectrum
        report_sections.append(f"# Certification Report: N={spectrum['N']}, r={spectrum['r']}\n")
        report_sections.append(f"**Generated:** {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
        report_sections.append(f"**Tool:** {report.tool} {report.version}\n")
        verdict = "PASS" if report.passed else "FAIL"
        if not report.complete:
            verdict += " (incomplete)"
        report_sections.append(f"**Verdict:** {verdict}\n")
        report_sections.append("---\n")

        report_sections.append("## Parameters\n")
        for key, value in report.parameters.model_dump().items():
            report_sections.append(f"- {key}: {value}\n")

        report_sections.append("\n## Conditions\n")
        if report.conditions:
            report_sections.append("| condition | anchor | max deviation | tolerance | pass |\n")
            report_sections.append("|---|---|---|---|---|\n")
            for entry in report.conditions:
                mark = "yes" if entry.passed else "no"
                report_sections.append(
                    f"| {entry.name} | {entry.anchor} | {entry.max_deviation:.3e} "
                    f"| {entry.tolerance:.3e} | {mark} |\n"
                )
        else:
            report_sections.append("No conditions were evaluated.\n")

        if report.error:
            report_sections.append("\n## Error\n")
            report_sections.append(f"`{report.error.get('error')}`: {report.error.get('message', '')}\n")

        report_sections.append(f"\n*Wall time: {report.wall_time_s:.2f} s*\n")
        return "".join(report_sections)


def save_report(report: CertificationReport, output_path: str) -> str:
    """Write the report as JSON, or as Markdown when the path ends in .md."""
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    writer = ReportWriter()
    if path.suffix == ".md":
        path.write_text(writer.write_markdown(report))
    else:
        path.write_text(writer.to_json(report) + "\n")
    logger.info("report written to %s", path)
    return str(path)


def load_report(path: str) -> CertificationReport:
    return CertificationReport.model_validate(json.loads(Path(path).read_text()))
