from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import DataError, DatasetNotFoundError
from ..estimation import SurvivalData
from ..nn import CovariateBatch
from .quality_gate import DatasetQualityGate

logger = logging.getLogger(__name__)


class CategoricalColumn(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    cardinality: int = Field(ge=1)


class DatasetSchema(BaseModel):
    """Column layout of a dataset CSV: covariates, then time, event type, indicator."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    numeric: list[str] = Field(default_factory=list)
    boolean: list[str] = Field(default_factory=list)
    categorical: list[CategoricalColumn] = Field(default_factory=list)
    time: str = "time"
    event_type: str = "event_type"
    event: str = "event"

    @model_validator(mode="after")
    def _unique_names(self) -> DatasetSchema:
        names = self.columns
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"Duplicate column names: {duplicates}")
        return self

    @classmethod
    def synthetic(cls) -> DatasetSchema:
        return cls(numeric=["x0", "x1"])

    @property
    def covariate_columns(self) -> list[str]:
        return [*self.numeric, *self.boolean, *(c.name for c in self.categorical)]

    @property
    def columns(self) -> list[str]:
        return [*self.covariate_columns, self.time, self.event_type, self.event]

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(c.cardinality for c in self.categorical)


def ingest(path: Path, schema: DatasetSchema) -> SurvivalData:
    """Read and validate a dataset CSV; errors cite the file line and column."""
    path = Path(path)
    if not path.exists():
        raise DatasetNotFoundError(f"Dataset not found: {path}")
    try:
        df = pd.read_csv(path, float_precision="round_trip", skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: file is empty") from None
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: malformed CSV: {e}") from None

    DatasetQualityGate.validate(df, schema, source=str(path))
    data = SurvivalData(
        covariates=CovariateBatch(
            numeric=df[schema.numeric].to_numpy(dtype=np.float64)
            if schema.numeric
            else np.zeros((len(df), 0)),
            boolean=df[schema.boolean].to_numpy(dtype=np.float64)
            if schema.boolean
            else np.zeros((len(df), 0)),
            categorical=df[[c.name for c in schema.categorical]].to_numpy(dtype=np.int64)
            if schema.categorical
            else np.zeros((len(df), 0), dtype=np.int64),
        ),
        time=df[schema.time].to_numpy(dtype=np.float64),
        event_type=df[schema.event_type].to_numpy(dtype=np.int64),
        event=df[schema.event].to_numpy(dtype=np.int64),
    )
    logger.info(
        f"Ingested {len(data)} records from {path} ({int(data.event.sum())} events)"
    )
    return data


def to_frame(data: SurvivalData, schema: DatasetSchema) -> pd.DataFrame:
    x = data.covariates
    if x.numeric.shape[1] != len(schema.numeric) or x.boolean.shape[1] != len(
        schema.boolean
    ) or x.categorical.shape[1] != len(schema.categorical):
        raise DataError("Data covariates do not match the dataset schema")
    cols: dict[str, np.ndarray] = {}
    for i, name in enumerate(schema.numeric):
        cols[name] = x.numeric[:, i]
    for i, name in enumerate(schema.boolean):
        cols[name] = x.boolean[:, i].astype(np.int64)
    for i, col in enumerate(schema.categorical):
        cols[col.name] = x.categorical[:, i]
    cols[schema.time] = data.time
    cols[schema.event_type] = data.event_type
    cols[schema.event] = data.event
    return pd.DataFrame(cols, columns=schema.columns)


def emit(data: SurvivalData, schema: DatasetSchema, path: Path) -> Path:
    """Write a dataset CSV with 17 significant digits so ingest reproduces it exactly."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    to_frame(data, schema).to_csv(path, index=False, float_format="%.17g")
    return path
