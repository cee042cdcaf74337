import json

import pytest

from storage.run_log import RunLog


def _lines(path):
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


def test_one_record_per_run(tmp_path):
    path = tmp_path / "log.jsonl"
    log = RunLog(str(path))
    session_id = log.start_session({"N": 2, "r": 1}, {"omega": 8.0})
    log.log_stage("pr", "completed", {"max_deviation": 0.0})
    log.log_stage("cascade", "completed", {"J": 30})
    assert not path.exists()

    log.end_session(session_id, status="completed", passed=True)
    records = _lines(path)
    assert len(records) == 1
    record = records[0]
    assert record["id"] == session_id
    assert record["status"] == "completed"
    assert record["passed"] is True
    assert [entry["stage"] for entry in record["stages"]] == ["pr", "cascade"]


def test_runs_are_appended_not_rewritten(tmp_path):
    path = tmp_path / "nested" / "log.jsonl"
    first_log = RunLog(str(path))
    first = first_log.start_session({"N": 1, "r": 1}, {})
    first_log.log_stage("pr", "completed", {})
    first_log.end_session(first, status="completed", passed=True)
    before = path.read_text()

    second_log = RunLog(str(path))
    second = second_log.start_session({"N": 3, "r": 1}, {})
    second_log.log_stage("spectrum", "completed", {})
    second_log.log_stage("pr", "failed", {})
    second_log.end_session(second, status="incomplete", passed=False)

    assert path.read_text().startswith(before)
    stats = RunLog(str(path)).get_stats()
    assert stats["total_sessions"] == 2
    assert stats["total_actions"] == 3
    assert stats["passed_sessions"] == 1
    assert stats["incomplete_sessions"] == 1
    assert stats["stages"]["pr"]["action_count"] == 2


def test_max_runs_keeps_newest(tmp_path):
    path = tmp_path / "log.jsonl"
    log = RunLog(str(path), max_runs=2)
    ids = []
    for N in (1, 2, 3):
        session_id = log.start_session({"N": N, "r": 1}, {})
        log.end_session(session_id, passed=True)
        ids.append(session_id)

    records = _lines(path)
    assert [record["spectrum"]["N"] for record in records] == [2, 3]
    assert [record["id"] for record in records] == ids[1:]


def test_invalid_bound_rejected(tmp_path):
    with pytest.raises(ValueError):
        RunLog(str(tmp_path / "log.jsonl"), max_runs=0)


def test_stage_outside_run_is_dropped(tmp_path):
    path = tmp_path / "log.jsonl"
    log = RunLog(str(path))
    log.log_stage("pr", "completed", {})
    log.end_session("missing")
    assert not path.exists()
    assert log.get_stats()["total_sessions"] == 0


def test_malformed_line_skipped(tmp_path, caplog):
    path = tmp_path / "log.jsonl"
    path.write_text("{broken\n")
    log = RunLog(str(path))
    assert log.get_stats()["total_sessions"] == 0
    assert "malformed run log line 1" in caplog.text

    session_id = log.start_session({"N": 1, "r": 1}, {})
    log.end_session(session_id, status="failed")
    assert log.runs()[-1]["status"] == "failed"
