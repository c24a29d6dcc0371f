from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..nn import CovariateBatch


@dataclass(frozen=True)
class SurvivalRecord:
    """One subject: covariates, observed time, event type (1..J, 0 if censored), indicator."""

    numeric: tuple[float, ...]
    boolean: tuple[int, ...]
    categorical: tuple[int, ...]
    time: float
    event_type: int
    event: int


@dataclass(frozen=True)
class SurvivalData:
    """Column view of a record list. Censored rows always carry event_type 0."""

    covariates: CovariateBatch
    time: np.ndarray
    event_type: np.ndarray
    event: np.ndarray

    def __post_init__(self) -> None:
        time = np.asarray(self.time, dtype=np.float64)
        event = np.asarray(self.event, dtype=np.int64)
        event_type = np.asarray(self.event_type, dtype=np.int64)
        n = len(self.covariates)
        if not (time.shape == event.shape == event_type.shape == (n,)):
            raise DataError(
                f"Columns disagree on length: covariates {n}, time {time.shape}, "
                f"event_type {event_type.shape}, event {event.shape}"
            )
        bad_time = ~np.isfinite(time) | (time < 0)
        if bad_time.any():
            raise DataError(f"Times must be finite and >= 0 (rows {_bad(bad_time)})")
        bad_event = ~np.isin(event, (0, 1))
        if bad_event.any():
            raise DataError(f"Event indicator must be 0 or 1 (rows {_bad(bad_event)})")
        bad_type = (event == 1) & (event_type < 1)
        if bad_type.any():
            raise DataError(
                f"Uncensored rows need an event type >= 1 (rows {_bad(bad_type)})"
            )
        object.__setattr__(self, "time", time)
        object.__setattr__(self, "event", event)
        object.__setattr__(self, "event_type", np.where(event == 1, event_type, 0))

    @classmethod
    def from_arrays(
        cls,
        time,
        event,
        event_type=None,
        numeric=None,
        boolean=None,
        categorical=None,
    ) -> SurvivalData:
        time = np.atleast_1d(np.asarray(time, dtype=np.float64))
        event = np.atleast_1d(np.asarray(event, dtype=np.int64))
        if event_type is None:
            event_type = event.copy()
        covariates = CovariateBatch.from_arrays(numeric, boolean, categorical)
        if len(covariates) == 0 and time.size:
            covariates = CovariateBatch.from_arrays(np.zeros((time.size, 0)))
        return cls(covariates=covariates, time=time, event_type=event_type, event=event)

    @classmethod
    def from_records(cls, records: Sequence[SurvivalRecord]) -> SurvivalData:
        if not records:
            return cls.empty()
        return cls(
            covariates=CovariateBatch.from_arrays(
                np.array([r.numeric for r in records], dtype=np.float64),
                np.array([r.boolean for r in records], dtype=np.float64),
                np.array([r.categorical for r in records], dtype=np.int64),
            ),
            time=np.array([r.time for r in records]),
            event_type=np.array([r.event_type for r in records]),
            event=np.array([r.event for r in records]),
        )

    @classmethod
    def empty(cls, numeric: int = 0, boolean: int = 0, categorical: int = 0) -> SurvivalData:
        return cls(
            covariates=CovariateBatch(
                numeric=np.zeros((0, numeric)),
                boolean=np.zeros((0, boolean)),
                categorical=np.zeros((0, categorical), dtype=np.int64),
            ),
            time=np.zeros(0),
            event_type=np.zeros(0, dtype=np.int64),
            event=np.zeros(0, dtype=np.int64),
        )

    def records(self) -> list[SurvivalRecord]:
        x = self.covariates
        return [
            SurvivalRecord(
                numeric=tuple(float(v) for v in x.numeric[i]),
                boolean=tuple(int(v) for v in x.boolean[i]),
                categorical=tuple(int(v) for v in x.categorical[i]),
                time=float(self.time[i]),
                event_type=int(self.event_type[i]),
                event=int(self.event[i]),
            )
            for i in range(len(self))
        ]

    def __len__(self) -> int:
        return int(self.time.size)

    def take(self, idx) -> SurvivalData:
        idx = np.asarray(idx, dtype=np.int64)
        return SurvivalData(
            covariates=self.covariates.take(idx),
            time=self.time[idx],
            event_type=self.event_type[idx],
            event=self.event[idx],
        )

    @property
    def uncensored(self) -> np.ndarray:
        return np.flatnonzero(self.event == 1)

    @property
    def event_count(self) -> int:
        """Largest event type present (0 for fully censored data)."""
        return int(self.event_type.max()) if len(self) else 0

    def check_event_types(self, event_count: int) -> None:
        if self.event_count > event_count:
            raise DataError(
                f"Data has event type {self.event_count} but the model has "
                f"{event_count} event types"
            )


def _bad(mask: np.ndarray) -> list[int]:
    return np.flatnonzero(mask)[:5].tolist()
