"""
Configuration management for the levsqueeze laboratory
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


class Settings:
    """Centralized configuration management"""

    # Output locations
    @property
    def output_dir(self) -> Path:
        return Path(os.environ.get("LEVSQUEEZE_OUTPUT_DIR", "runs"))

    @property
    def log_dir(self) -> Optional[Path]:
        value = os.environ.get("LEVSQUEEZE_LOG_DIR")
        return Path(value) if value else None

    @property
    def log_level(self) -> str:
        return os.environ.get("LEVSQUEEZE_LOG_LEVEL", "INFO")

    # Simulation defaults
    @property
    def default_seed(self) -> int:
        return int(os.environ.get("LEVSQUEEZE_SEED", "20210915"))

    @property
    def workers(self) -> int:
        return max(1, int(os.environ.get("LEVSQUEEZE_WORKERS", "1")))

    # Run ledger
    @property
    def ledger_enabled(self) -> bool:
        return os.environ.get("LEVSQUEEZE_LEDGER", "1").lower() in ("1", "true", "yes")

    def ledger_path(self, output_dir: Optional[Path] = None) -> Path:
        """Ledger database inside the given (or default) output directory"""
        return Path(output_dir or self.output_dir) / "run_ledger.sqlite"


# Global settings instance
settings = Settings()
