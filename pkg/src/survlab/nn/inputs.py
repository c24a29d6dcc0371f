from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError


def _block(values, dtype) -> np.ndarray | None:
    if values is None:
        return None
    arr = np.asarray(values, dtype=dtype)
    if arr.ndim == 1:
        # a single record
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DataError(f"Covariate block must be 1-D or 2-D, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class CovariateBatch:
    """Rows of covariates split by kind: numeric, boolean (0/1), categorical levels."""

    numeric: np.ndarray
    boolean: np.ndarray
    categorical: np.ndarray

    @classmethod
    def from_arrays(
        cls,
        numeric=None,
        boolean=None,
        categorical=None,
    ) -> CovariateBatch:
        num = _block(numeric, np.float64)
        boo = _block(boolean, np.float64)
        cat = _block(categorical, np.int64)
        present = [b for b in (num, boo, cat) if b is not None]
        n = present[0].shape[0] if present else 0
        if num is None:
            num = np.zeros((n, 0))
        if boo is None:
            boo = np.zeros((n, 0))
        if cat is None:
            cat = np.zeros((n, 0), dtype=np.int64)
        if not (num.shape[0] == boo.shape[0] == cat.shape[0]):
            raise DataError(
                "Covariate blocks disagree on row count: "
                f"{num.shape[0]}, {boo.shape[0]}, {cat.shape[0]}"
            )
        return cls(numeric=num, boolean=boo, categorical=cat)

    def __len__(self) -> int:
        return int(self.numeric.shape[0])

    def take(self, idx) -> CovariateBatch:
        idx = np.asarray(idx, dtype=np.int64)
        return CovariateBatch(
            numeric=self.numeric[idx],
            boolean=self.boolean[idx],
            categorical=self.categorical[idx],
        )

    def with_numeric(self, column: int, values) -> CovariateBatch:
        """Copy with one numeric column replaced (scalar broadcast or per-row)."""
        num = self.numeric.copy()
        num[:, column] = values
        return CovariateBatch(
            numeric=num, boolean=self.boolean, categorical=self.categorical
        )
