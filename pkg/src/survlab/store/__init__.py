from .dataset import CategoricalColumn, DatasetSchema, emit, ingest, to_frame
from .manifest import RunManifest, sha256_of
from .model_store import (
    MODEL_FORMAT,
    load_model,
    model_from_dict,
    model_to_dict,
    save_model,
)
from .quality_gate import DatasetQualityGate

__all__ = [
    "MODEL_FORMAT",
    "CategoricalColumn",
    "DatasetQualityGate",
    "DatasetSchema",
    "RunManifest",
    "emit",
    "ingest",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "save_model",
    "sha256_of",
    "to_frame",
]
