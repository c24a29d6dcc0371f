from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

UTC = timezone.utc

logger = logging.getLogger(__name__)


def sha256_of(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Record of one CLI run, persisted as manifest.json in its output directory."""

    command: str
    output_dir: Path
    seed: int
    config: dict[str, Any] = field(default_factory=dict)
    status: str = "running"
    started_at: str = field(default_factory=lambda: datetime.now(UTC).isoformat())
    ended_at: str | None = None
    error_class: str | None = None
    error_text: str | None = None
    artifacts: dict[str, Path] = field(default_factory=dict)

    def add_artifact(self, name: str, path: Path) -> Path:
        self.artifacts[name] = Path(path)
        return path

    def finish(self, status: str, error_class: str | None = None, error_text: str | None = None) -> None:
        self.status = status
        self.error_class = error_class
        self.error_text = error_text
        self.ended_at = datetime.now(UTC).isoformat()

    def to_dict(self) -> dict[str, Any]:
        artifacts = []
        for name, path in sorted(self.artifacts.items()):
            entry: dict[str, Any] = {"name": name, "path": str(path)}
            if path.exists():
                entry["sha256"] = sha256_of(path)
                entry["bytes"] = path.stat().st_size
            artifacts.append(entry)
        return {
            "command": self.command,
            "output_dir": str(self.output_dir) + "/",
            "seed": self.seed,
            "status": self.status,
            "started_at": self.started_at,
            "ended_at": self.ended_at,
            "error_class": self.error_class,
            "error_text": self.error_text,
            "config": self.config,
            "artifacts": artifacts,
        }

    def persist(self) -> Path:
        path = self.output_dir / "manifest.json"
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            path.write_text(
                json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n",
                encoding="utf-8",
            )
        except OSError as e:
            logger.warning(f"Could not write {path}: {e}")
        return path
