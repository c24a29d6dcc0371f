import logging
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from ..errors import ConfigNotFoundError, ConfigurationError
from .config import ExperimentConfig

logger = logging.getLogger(__name__)


class ExperimentLoader:
    """
    Loads and validates experiment YAML files.
    """

    @staticmethod
    def load_yaml(file_path: Path) -> ExperimentConfig:
        """Load YAML file from path; a missing file is a config-not-found error."""
        file_path = Path(file_path)
        if not file_path.exists():
            raise ConfigNotFoundError(f"Experiment config not found: {file_path}")

        with open(file_path, encoding="utf-8") as f:
            try:
                raw = yaml.safe_load(f)
            except yaml.YAMLError as e:
                logger.error(f"YAML parsing error in {file_path}: {e}")
                raise ConfigurationError(f"{file_path}: invalid YAML: {e}") from None
        try:
            return ExperimentLoader.validate(raw or {})
        except ConfigurationError as e:
            logger.error(f"Validation error in {file_path}: {e}")
            raise ConfigurationError(f"{file_path}: {e}") from None

    @staticmethod
    def validate(raw: dict[str, Any]) -> ExperimentConfig:
        if not isinstance(raw, dict):
            raise ConfigurationError("Experiment config must be a mapping at the top level")
        try:
            return ExperimentConfig.model_validate(raw)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(p) for p in first["loc"]) or "<root>"
            raise ConfigurationError(f"{where}: {first['msg']}") from None

    @staticmethod
    def dump_yaml(config: ExperimentConfig) -> str:
        """Fully resolved configuration, every default included."""
        payload = config.model_dump(mode="json", by_alias=True)
        return yaml.safe_dump(payload, sort_keys=False)
