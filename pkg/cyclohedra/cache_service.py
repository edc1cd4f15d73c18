"""
Result Cache Service

Handles:
- Persisting exact distance and diameter reports as JSON lines
- Lookup by command and canonical parameters
- Schema-version filtering of stale records
- Cross-process safe appends via a file lock
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from filelock import FileLock
from pydantic import ValidationError

from .config import SCHEMA_VERSION
from .models import CacheRecord, DistanceReport

logger = logging.getLogger(__name__)


class ResultCache:
    """
    Append-only store of DistanceReports, one CacheRecord per line.
    """

    FILE_NAME = "results.jsonl"

    def __init__(self, cache_dir: Path, enabled: bool = True):
        """
        Initialize Result Cache.

        Args:
            cache_dir: directory holding the record file and its lock
            enabled: when False every lookup misses and nothing is written
        """
        self.enabled = enabled
        self.path = Path(cache_dir) / self.FILE_NAME
        self.lock = FileLock(str(self.path) + ".lock")
        self._records: Optional[Dict[str, CacheRecord]] = None
        logger.info(f"Result Cache initialized at {self.path} (enabled={enabled})")

    @staticmethod
    def key(command: str, params: Dict[str, Any]) -> str:
        return json.dumps({"command": command, "params": params}, sort_keys=True)

    def _load(self) -> Dict[str, CacheRecord]:
        if self._records is not None:
            return self._records
        records: Dict[str, CacheRecord] = {}
        if self.path.exists():
            with self.lock:
                lines = self.path.read_text().splitlines()
            for number, line in enumerate(lines, start=1):
                if not line.strip():
                    continue
                try:
                    record = CacheRecord.model_validate_json(line)
                except ValidationError as e:
                    logger.warning(f"Skipping malformed cache record at line {number}: {e.error_count()} error(s)")
                    continue
                if record.schema_version != SCHEMA_VERSION:
                    continue
                records[self.key(record.command, record.params)] = record
        self._records = records
        return records

    def get(self, command: str, params: Dict[str, Any]) -> Optional[DistanceReport]:
        if not self.enabled:
            return None
        record = self._load().get(self.key(command, params))
        if record is None:
            return None
        logger.debug(f"Cache hit for {command} {params}")
        return DistanceReport.model_validate(record.report)

    def put(self, command: str, params: Dict[str, Any], report: DistanceReport) -> None:
        """Store an exact report; partial results are never cached."""
        if not self.enabled or report.partial:
            return
        record = CacheRecord(command=command, params=params, report=report.model_dump(mode="json"))
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.lock:
            with self.path.open("a") as handle:
                handle.write(record.model_dump_json() + "\n")
        self._load()[self.key(command, params)] = record

    def clear(self) -> None:
        with self.lock:
            if self.path.exists():
                self.path.unlink()
        self._records = {}
        logger.info("Result cache cleared")
