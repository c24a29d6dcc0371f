from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from ..basis import BasisSet
from ..errors import ModelFileError, SurvLabError
from ..models import MnnModel, PhMnnModel, PositivityMap, StepFunction, create_model
from ..nn import NetworkParams, NetworkSpec

logger = logging.getLogger(__name__)

MODEL_FORMAT = "survlab-model/1"


def model_to_dict(model: MnnModel) -> dict[str, Any]:
    params = model.params
    baselines = None
    if isinstance(model, PhMnnModel) and model.baselines is not None:
        baselines = [b.to_dict() for b in model.baselines]
    return {
        "format": MODEL_FORMAT,
        "kind": model.kind,
        "positivity": model.positivity.kind,
        "network": {
            "spec": params.spec.to_dict(),
            "weights": [w.tolist() for w in params.weights],
            "biases": [b.tolist() for b in params.biases],
            "embeddings": [e.tolist() for e in params.embeddings],
        },
        "bases": [b.to_dict() for b in model.bases],
        "baselines": baselines,
    }


def _array(values: Any, shape: tuple[int, ...], what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        arr = arr.reshape(shape)
    if arr.shape != shape:
        raise ModelFileError(f"{what} has shape {arr.shape}, expected {shape}")
    return arr


def model_from_dict(doc: dict[str, Any]) -> MnnModel:
    if doc.get("format") != MODEL_FORMAT:
        raise ModelFileError(
            f"Unsupported model format {doc.get('format')!r}, expected {MODEL_FORMAT}"
        )
    try:
        net = doc["network"]
        spec = NetworkSpec.from_dict(net["spec"])
        template = NetworkParams.zeros(spec)
        params = NetworkParams(
            spec=spec,
            weights=[
                _array(w, t.shape, f"weights[{i}]")
                for i, (w, t) in enumerate(zip(net["weights"], template.weights, strict=True))
            ],
            biases=[
                _array(b, t.shape, f"biases[{i}]")
                for i, (b, t) in enumerate(zip(net["biases"], template.biases, strict=True))
            ],
            embeddings=[
                _array(e, t.shape, f"embeddings[{i}]")
                for i, (e, t) in enumerate(
                    zip(net["embeddings"], template.embeddings, strict=True)
                )
            ],
        )
        bases = [BasisSet.from_dict(b) for b in doc["bases"]]
        model = create_model(doc["kind"], params, bases, PositivityMap(doc["positivity"]))
        if isinstance(model, PhMnnModel) and doc.get("baselines") is not None:
            model = model.with_baselines(
                [StepFunction.from_dict(b) for b in doc["baselines"]]
            )
    except ModelFileError:
        raise
    except (KeyError, TypeError, ValueError, SurvLabError) as e:
        raise ModelFileError(f"Invalid model document: {e}") from None
    return model


def save_model(model: MnnModel, path: Path) -> Path:
    """Write the model as JSON; infinite baseline jumps become `Infinity`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(model_to_dict(model), indent=2) + "\n", encoding="utf-8")
    logger.info(f"Saved {model.kind} model to {path}")
    return path


def load_model(path: Path) -> MnnModel:
    path = Path(path)
    if not path.exists():
        raise ModelFileError(f"Model file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ModelFileError(f"{path}: not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ModelFileError(f"{path}: expected a JSON object")
    return model_from_dict(doc)
