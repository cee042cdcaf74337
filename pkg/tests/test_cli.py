import csv
import json

import pytest

from main import main
from tests.conftest import BANKS_DIR
from utils.report_export import load_report

SHANNON_N2 = ["--N", "2", "--r", "1", "--omega", "8", "--step", "1/128", "--jlo", "-1", "--jhi", "1"]


def _certify(tmp_path, name, *flags):
    out = tmp_path / name
    code = main(["--no-log", "certify", *flags, "--out", str(out)])
    return code, load_report(str(out))


def _failed(report):
    return [entry.name for entry in report.conditions if not entry.passed]


def test_validate_accepts_spectrum(capsys):
    assert main(["validate", "--N", "2", "--r", "3"]) == 0
    assert json.loads(capsys.readouterr().out) == {"valid": True, "spectrum": {"N": 2, "r": 3}}


def test_validate_rejects_even_offset(capsys):
    assert main(["validate", "--N", "2", "--r", "2"]) == 2
    body = json.loads(capsys.readouterr().out)
    assert body["error"] == "RNotOdd"
    assert "constraint" in body


def test_certify_shannon(tmp_path):
    code, report = _certify(tmp_path, "shannon.json", *SHANNON_N2)
    assert code == 0
    assert report.complete
    assert report.error is None
    names = {entry.name for entry in report.conditions}
    assert {"perfect_reconstruction", "decay_fit", "frame_bounds", "frame_chain",
            "cross_scale_biorthogonality", "one_level_identity", "one_level_identity_dual"} <= names
    assert _failed(report) == []
    assert report.passed


@pytest.mark.parametrize("bank", ["shannon_n2_r1.json", "haar_n1.json"])
def test_bank_file_passes_every_condition(tmp_path, bank):
    code, report = _certify(tmp_path, "bank.json", "--bank", str(BANKS_DIR / bank))
    assert code == 0
    assert report.complete
    assert _failed(report) == []
    assert report.passed
    cross = report.entry("cross_scale_biorthogonality")
    assert cross.parameters["levels"] == [-1, 0, 1, 2]
    assert cross.parameters["window"] == 4


def test_haar_checks_use_closed_forms(tmp_path):
    _, report = _certify(tmp_path, "haar.json", "--bank", str(BANKS_DIR / "haar_n1.json"), "--jlo", "-1", "--jhi", "1")
    assert report.parameters.N == 1
    assert report.entry("cross_scale_biorthogonality").parameters["method"] == "time_closed_form"
    assert report.entry("refinement").tolerance == 1e-6
    assert report.passed


def test_corrupted_bank_runs_and_fails_reconstruction(tmp_path):
    payload = json.loads((BANKS_DIR / "haar_n1.json").read_text())
    # Both channels carry the lowpass mask.
    payload["synthesis"][1] = payload["synthesis"][0]
    bank = tmp_path / "duplicate.json"
    bank.write_text(json.dumps(payload))
    code, report = _certify(tmp_path, "duplicate_report.json", "--bank", str(bank))
    assert code == 0
    assert not report.passed
    assert not report.entry("perfect_reconstruction").passed


def test_certify_stops_when_gamma_does_not_tile(tmp_path):
    code, report = _certify(tmp_path, "n3.json", "--N", "3", "--r", "1")
    assert code == 2
    assert not report.complete
    assert not report.passed
    assert report.error["error"] == "NotATile"


def test_certify_writes_run_log(tmp_path, capsys):
    assert main(["certify", "--N", "1", "--r", "1", "--step", "1/64", "--lwindow", "2",
                 "--jlo", "-1", "--jhi", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["complete"]
    assert main(["history"]) == 0
    out = capsys.readouterr().out
    assert "Sessions: 1" in out
    assert "frame=0.01" in out


def test_rerun_from_report_is_identical(tmp_path):
    flags = ["--N", "1", "--r", "1", "--step", "1/64", "--lwindow", "2", "--jlo", "-1", "--jhi", "0"]
    _, first = _certify(tmp_path, "first.json", *flags)
    code, second = _certify(tmp_path, "second.json", "--params", str(tmp_path / "first.json"))
    assert code == 0
    assert second.parameters == first.parameters
    assert second.deviations() == first.deviations()


def test_rerun_needs_a_readable_report(tmp_path, capsys):
    assert main(["--no-log", "certify", "--params", str(tmp_path / "absent.json")]) == 3
    assert json.loads(capsys.readouterr().out)["error"] == "BankFileError"


def test_export_with_empty_bank(tmp_path, capsys):
    bank = tmp_path / "empty.json"
    bank.write_text("")
    assert main(["export", "wavelets", "--bank", str(bank)]) == 3
    assert json.loads(capsys.readouterr().out)["error"] == "BankFileError"


def test_export_scaling_with_provenance(tmp_path):
    out = tmp_path / "phi.json"
    assert main(["export", "scaling", "--N", "1", "--r", "1", "--step", "1/64", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["omega"] == 8.0
    assert len(payload["samples"]) == payload["provenance"]["grid"]["count"] == 1025
    assert len(payload["provenance"]["mask_hash"]) == 64


def test_export_wavelets_csv(tmp_path):
    out = tmp_path / "psi.csv"
    assert main(["export", "wavelets", "--N", "2", "--r", "1", "--step", "1/32", "--out", str(out)]) == 0
    with out.open() as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["channel", "xi", "re", "im"]
    assert {row[0] for row in rows[1:]} == {"1", "2", "3"}
    assert len(rows) == 1 + 3 * 513


@pytest.mark.parametrize("target", [None, "schema.json"])
def test_schema_command(tmp_path, capsys, target):
    args = ["schema"] + (["--out", str(tmp_path / target)] if target else [])
    assert main(args) == 0
    text = (tmp_path / target).read_text() if target else capsys.readouterr().out
    schema = json.loads(text)
    assert schema["title"] == "CertificationReport"
    assert "conditions" in schema["properties"]
