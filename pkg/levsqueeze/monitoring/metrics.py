"""
Run ledger: one row per executed command
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..config.settings import settings
from ..database.connection import db_manager
from ..utils.logging import monitoring_logger
from ..utils.exceptions import DataIOError

LEDGER_SCHEMA = """
    CREATE TABLE IF NOT EXISTS command_runs (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        timestamp DATETIME DEFAULT CURRENT_TIMESTAMP,
        command TEXT,
        started_at TEXT,
        execution_time_ms REAL,
        success BOOLEAN,
        exit_code INTEGER,
        seed INTEGER,
        config_hash TEXT,
        version TEXT,
        artifact_count INTEGER,
        error_message TEXT,
        input_params TEXT
    );
"""


class RunMonitor:
    """Records command executions into run_ledger.sqlite of the output directory"""

    def __init__(self, output_dir: Optional[Path] = None):
        self.output_dir = Path(output_dir or settings.output_dir)
        self._initialized = False

    @property
    def ledger_path(self) -> Path:
        return settings.ledger_path(self.output_dir)

    def init_ledger(self) -> bool:
        """Create the ledger table; False when the ledger is unavailable"""
        if self._initialized:
            return True
        try:
            db_manager.ensure_table(self.ledger_path, LEDGER_SCHEMA)
            self._initialized = True
            monitoring_logger.debug(f"Run ledger initialized at: {self.ledger_path}")
        except DataIOError as e:
            monitoring_logger.error(f"Error initializing run ledger: {e}")
        return self._initialized

    def log_run(self, command: str, execution_time_ms: float, success: bool, exit_code: int,
                seed: Optional[int] = None, config_hash: Optional[str] = None,
                version: Optional[str] = None, artifact_count: int = 0,
                error_message: Optional[str] = None,
                input_params: Optional[Dict[str, Any]] = None) -> None:
        """Append one command execution; failures are logged, never raised"""
        if not settings.ledger_enabled or not self.init_ledger():
            return
        row = {
            "command": command,
            "started_at": datetime.now().isoformat(timespec="seconds"),
            "execution_time_ms": execution_time_ms,
            "success": success,
            "exit_code": exit_code,
            "seed": seed,
            "config_hash": config_hash,
            "version": version,
            "artifact_count": artifact_count,
            "error_message": error_message,
            "input_params": json.dumps(input_params, default=str) if input_params else None,
        }
        try:
            db_manager.insert_row(self.ledger_path, "command_runs", row)
            monitoring_logger.debug(f"Logged run: {command} ({execution_time_ms:.1f}ms, exit {exit_code})")
        except DataIOError as e:
            monitoring_logger.error(f"Error logging run: {e}")

    def recent_runs(self, limit: int = 20) -> List[Dict[str, Any]]:
        if not self.ledger_path.exists():
            return []
        try:
            return db_manager.fetch(self.ledger_path,
                                    "SELECT * FROM command_runs ORDER BY id DESC LIMIT ?", (limit,))
        except DataIOError as e:
            monitoring_logger.error(f"Error reading run ledger: {e}")
            return []
