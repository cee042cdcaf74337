import json

import jsonschema
import pytest

from tests.conftest import REPO_ROOT
from utils.report_export import (
    CertificationReport,
    ConditionEntry,
    ReportWriter,
    RunParameters,
    load_report,
    report_schema,
    save_report,
)

SCHEMA_PATH = REPO_ROOT / "schema" / "report.schema.json"


def _parameters(**overrides):
    values = dict(N=2, r=1, omega=8.0, step=1 / 512, n_max=5, j_lo=-2, j_hi=4,
                  lambda_window=16, seed=0, cascade_depth=30, signal_count=20)
    values.update(overrides)
    return RunParameters(**values)


def _report():
    report = CertificationReport(spectrum={"N": 2, "r": 1}, parameters=_parameters(), seed=0)
    report.add(ConditionEntry(name="perfect_reconstruction", anchor="M M~* = I", max_deviation=1e-15, tolerance=1e-12))
    report.add(ConditionEntry(name="riesz_lower_bound", anchor="A > 0", max_deviation=0.0, tolerance=0.0,
                              details={"lower": 1.0, "upper": 1.0}))
    return report


@pytest.mark.parametrize(
    "deviation, tolerance, expected",
    [(0.0, 0.0, True), (1e-13, 1e-12, True), (2e-12, 1e-12, False), (float("nan"), 1.0, False),
     (float("inf"), 1.0, False)],
)
def test_passed_is_derived(deviation, tolerance, expected):
    entry = ConditionEntry(name="c", anchor="a", max_deviation=deviation, tolerance=tolerance, passed=not expected)
    assert entry.passed is expected


def test_finalize_requires_completion():
    report = _report()
    assert report.finalize(complete=True, wall_time_s=1.5).passed
    assert not report.finalize(complete=False, wall_time_s=1.5).passed

    report.add(ConditionEntry(name="decay_fit", anchor="eps > 0", max_deviation=1.0, tolerance=0.0))
    assert not report.finalize(complete=True, wall_time_s=2.0).passed


def test_lookup_by_name():
    report = _report()
    assert report.entry("riesz_lower_bound").details["lower"] == 1.0
    assert report.deviations() == {"perfect_reconstruction": 1e-15, "riesz_lower_bound": 0.0}
    with pytest.raises(KeyError):
        report.entry("missing")


def test_unknown_fields_are_rejected():
    with pytest.raises(ValueError):
        ConditionEntry(name="c", anchor="a", max_deviation=0.0, tolerance=0.0, note="x")


def test_markdown_summary():
    report = _report()
    report.error = {"error": "NotATile", "message": "Gamma does not tile"}
    text = ReportWriter().write_markdown(report.finalize(complete=False, wall_time_s=0.25))
    assert text.startswith("# Certification Report: N=2, r=1")
    assert "FAIL (incomplete)" in text
    assert "| perfect_reconstruction |" in text
    assert "`NotATile`" in text


def test_save_and_load(tmp_path):
    report = _report().finalize(complete=True, wall_time_s=0.5)
    loaded = load_report(save_report(report, str(tmp_path / "out" / "report.json")))
    assert loaded == report

    markdown = save_report(report, str(tmp_path / "report.md"))
    assert open(markdown).read().startswith("# Certification Report")


def test_report_validates_against_shipped_schema():
    report = _report().finalize(complete=True, wall_time_s=0.5)
    schema = json.loads(SCHEMA_PATH.read_text())
    jsonschema.validate(json.loads(ReportWriter().to_json(report)), schema)

    broken = json.loads(ReportWriter().to_json(report))
    broken["surprise"] = True
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(broken, schema)


def test_shipped_schema_matches_models():
    shipped = json.loads(SCHEMA_PATH.read_text())
    generated = report_schema()
    assert shipped["$schema"] == generated["$schema"]
    assert set(shipped["properties"]) == set(generated["properties"])
    assert set(shipped["required"]) == set(generated["required"])
    for name, definition in generated["$defs"].items():
        assert set(shipped["$defs"][name]["properties"]) == set(definition["properties"])
        assert set(shipped["$defs"][name]["required"]) == set(definition["required"])
