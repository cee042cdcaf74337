"""
Run Log - Certification Audit Trail

Role: Episodic record of certification runs
Responsibility: Keep one record per certification run, with the stages it
went through, so a later `numra history` can say what was certified, when,
and how it ended.

The log is a JSON-lines file: a run is buffered in memory while its stages
execute and appended as a single line when it ends. With max_runs set, the
file is cut back to the newest max_runs records on each append.
"""

import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


class RunLog:
    """Append-only log of certification runs, one JSON object per line."""

    def __init__(self, storage_path: str = "storage/run_log.jsonl", max_runs: Optional[int] = None):
        if max_runs is not None and max_runs < 1:
            raise ValueError(f"max_runs must be >= 1, got {max_runs}")
        self.storage_path = storage_path
        self.max_runs = max_runs
        self.current: Optional[Dict[str, Any]] = None

    def start_session(self, spectrum: Dict[str, int], parameters: Dict[str, Any]) -> str:
        """Begin a certification run and return its id; nothing is written yet."""
        started = datetime.now()
        self.current = {
            "id": f"run_{started.strftime('%Y%m%dT%H%M%S%f')}",
            "spectrum": spectrum,
            "parameters": parameters,
            "started": started.isoformat(),
            "status": "active",
            "stages": [],
        }
        return self.current["id"]

    def log_stage(self, stage: str, action: str, data: Dict[str, Any]) -> None:
        if self.current is None:
            logger.debug("stage %s logged outside a run; dropped", stage)
            return
        self.current["stages"].append({
            "stage": stage,
            "action": action,
            "timestamp": datetime.now().isoformat(),
            "data": data,
        })

    def end_session(self, session_id: str, status: str = "completed", passed: Optional[bool] = None) -> None:
        """Close the current run (completed, incomplete or failed) and append it to the file."""
        if self.current is None or self.current["id"] != session_id:
            logger.warning("no open run with id %s", session_id)
            return
        record = {**self.current, "ended": datetime.now().isoformat(), "status": status}
        if passed is not None:
            record["passed"] = passed
        self.current = None
        self._append(record)

    def runs(self) -> List[Dict[str, Any]]:
        """Every readable record, oldest first; malformed lines are skipped."""
        if not os.path.exists(self.storage_path):
            return []
        records = []
        try:
            with open(self.storage_path, "r") as f:
                for number, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        records.append(json.loads(line))
                    except json.JSONDecodeError:
                        logger.warning("skipping malformed run log line %d in %s", number, self.storage_path)
        except OSError as e:
            logger.warning("could not load run log %s: %s", self.storage_path, e)
        return records

    def get_stats(self) -> Dict[str, Any]:
        runs = self.runs()
        stages: Dict[str, Dict[str, Any]] = {}
        for run in runs:
            for entry in run.get("stages", []):
                info = stages.setdefault(entry["stage"], {"first_seen": entry["timestamp"], "action_count": 0})
                info["action_count"] += 1
                info["last_seen"] = entry["timestamp"]
        return {
            "total_sessions": len(runs),
            "total_actions": sum(len(run.get("stages", [])) for run in runs),
            "passed_sessions": sum(1 for run in runs if run.get("passed")),
            "incomplete_sessions": sum(1 for run in runs if run.get("status") == "incomplete"),
            "stages": stages,
        }

    def _append(self, record: Dict[str, Any]) -> None:
        try:
            directory = os.path.dirname(self.storage_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.storage_path, "a") as f:
                f.write(json.dumps(record) + "\n")
            if self.max_runs is not None:
                self._trim()
        except OSError as e:
            logger.warning("could not save run log %s: %s", self.storage_path, e)

    def _trim(self) -> None:
        runs = self.runs()
        if len(runs) <= self.max_runs:
            return
        with open(self.storage_path, "w") as f:
            for run in runs[-self.max_runs:]:
                f.write(json.dumps(run) + "\n")
