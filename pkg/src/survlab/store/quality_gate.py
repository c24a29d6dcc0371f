from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

from ..errors import DataError

if TYPE_CHECKING:
    from .dataset import DatasetSchema

logger = logging.getLogger(__name__)

# header is file line 1, the first data row is line 2
FIRST_DATA_LINE = 2


class DatasetQualityGate:
    @staticmethod
    def _fail(source: str, row: int, column: str, reason: str) -> DataError:
        return DataError(
            f"{source}: line {row + FIRST_DATA_LINE}, column '{column}': {reason}"
        )

    @staticmethod
    def _numeric(df: pd.DataFrame, column: str, source: str) -> np.ndarray:
        raw = df[column]
        values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=np.float64)
        bad = np.flatnonzero(np.isnan(values) | ~np.isfinite(values))
        if bad.size:
            i = int(bad[0])
            raise DatasetQualityGate._fail(
                source, i, column, f"expected a finite number, got '{raw.iloc[i]}'"
            )
        return values

    @staticmethod
    def _integer(df: pd.DataFrame, column: str, source: str) -> np.ndarray:
        values = DatasetQualityGate._numeric(df, column, source)
        bad = np.flatnonzero(values != np.round(values))
        if bad.size:
            i = int(bad[0])
            raise DatasetQualityGate._fail(
                source, i, column, f"expected an integer, got {values[i]!r}"
            )
        return values

    @staticmethod
    def validate(df: pd.DataFrame, schema: DatasetSchema, source: str = "dataset") -> bool:
        """
        Validate a dataset frame against its schema.
        Raises DataError at the first violation, citing file line and column.
        """
        header = list(df.columns)
        if header != schema.columns:
            missing = [c for c in schema.columns if c not in header]
            extra = [c for c in header if c not in schema.columns]
            raise DataError(
                f"{source}: line 1: header {header} does not match schema "
                f"{schema.columns} (missing {missing}, unexpected {extra})"
            )

        for column in schema.numeric:
            DatasetQualityGate._numeric(df, column, source)
        for column in schema.boolean:
            values = DatasetQualityGate._integer(df, column, source)
            bad = np.flatnonzero(~np.isin(values, (0, 1)))
            if bad.size:
                raise DatasetQualityGate._fail(
                    source, int(bad[0]), column, f"boolean must be 0 or 1, got {values[bad[0]]:g}"
                )
        for col in schema.categorical:
            values = DatasetQualityGate._integer(df, col.name, source)
            bad = np.flatnonzero((values < 0) | (values >= col.cardinality))
            if bad.size:
                raise DatasetQualityGate._fail(
                    source,
                    int(bad[0]),
                    col.name,
                    f"unknown level {values[bad[0]]:g} (cardinality {col.cardinality})",
                )

        time = DatasetQualityGate._numeric(df, schema.time, source)
        bad = np.flatnonzero(time < 0)
        if bad.size:
            raise DatasetQualityGate._fail(
                source, int(bad[0]), schema.time, f"time must be >= 0, got {time[bad[0]]:g}"
            )
        event = DatasetQualityGate._integer(df, schema.event, source)
        bad = np.flatnonzero(~np.isin(event, (0, 1)))
        if bad.size:
            raise DatasetQualityGate._fail(
                source, int(bad[0]), schema.event, f"event must be 0 or 1, got {event[bad[0]]:g}"
            )
        event_type = DatasetQualityGate._integer(df, schema.event_type, source)
        bad = np.flatnonzero((event_type < 0) | ((event == 1) & (event_type < 1)))
        if bad.size:
            raise DatasetQualityGate._fail(
                source,
                int(bad[0]),
                schema.event_type,
                f"event type must be >= 1 for events and >= 0 otherwise, got {event_type[bad[0]]:g}",
            )
        if len(df) == 0:
            logger.warning(f"{source}: dataset has no rows")
        return True
