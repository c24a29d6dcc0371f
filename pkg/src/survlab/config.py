from __future__ import annotations

from pathlib import Path

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    # Execution artifacts SSOT
    survlab_artifacts_dir: Path = Path("./artifacts")
    survlab_runs_dir: Path | None = None

    survlab_log_level: str = "INFO"
    survlab_verbose: bool = False
    # run.log lines; the console goes through RichHandler
    survlab_run_log_format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"
    survlab_run_log_datefmt: str = "%Y-%m-%d %H:%M:%S"

    # Parallelism across CV folds / benchmark seeds only
    survlab_threads: int = 1

    @field_validator("survlab_threads")
    @classmethod
    def _threads_positive(cls, v: int) -> int:
        if v == 0:
            raise ValueError("survlab_threads must be nonzero (-1 = all cores)")
        return v

    @property
    def runs_dir(self) -> Path:
        """Run output root; defaults to `<artifacts>/runs`."""
        return self.survlab_runs_dir or self.survlab_artifacts_dir / "runs"


settings = Settings()
