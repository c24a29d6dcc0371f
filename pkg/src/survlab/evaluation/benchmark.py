from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from ..errors import error_class_of
from ..synthetic import SyntheticSpec, oracle_survival, sample_dataset
from .cross_validation import Fitter
from .metrics import integrated_squared_error

logger = logging.getLogger(__name__)

# test samples use seeds offset from the training seeds
TEST_SEED_OFFSET = 1_000_003


def _ise_run(
    kind: str,
    fitter: Fitter,
    n: int,
    seed: int,
    test_size: int,
    horizon: float,
    step: float,
) -> dict:
    row = {"kind": kind, "n": n, "seed": seed, "ise": np.nan, "error": ""}
    try:
        train = sample_dataset(SyntheticSpec(n=n, seed=seed, horizon=horizon))
        test = sample_dataset(
            SyntheticSpec(n=test_size, seed=seed + TEST_SEED_OFFSET, horizon=horizon)
        )
        model = fitter(train, seed)
        row["ise"] = integrated_squared_error(
            model, test, oracle_survival, horizon=horizon, step=step
        )
    except Exception as e:
        logger.warning(f"{kind}: n={n} seed={seed} failed: {e}")
        row["error"] = error_class_of(e)
    return row


def ise_benchmark(
    fitters: Mapping[str, Fitter],
    sizes: Sequence[int],
    seeds: Sequence[int],
    test_size: int = 1000,
    horizon: float = 10.0,
    step: float = 0.1,
    threads: int = 1,
) -> pd.DataFrame:
    """ISE against the synthetic oracle for every model kind, dataset size and seed."""
    jobs = [
        delayed(_ise_run)(kind, fitter, int(n), int(seed), test_size, horizon, step)
        for n in sizes
        for seed in seeds
        for kind, fitter in fitters.items()
    ]
    logger.info(f"ISE benchmark: {len(jobs)} runs on {threads} worker(s)")
    rows = Parallel(n_jobs=threads)(jobs)
    return pd.DataFrame(rows, columns=["kind", "n", "seed", "ise", "error"])


def summarize_ise(results: pd.DataFrame) -> dict[str, dict[str, dict[str, float]]]:
    """Mean ISE and its standard error per kind and dataset size."""
    summary: dict[str, dict[str, dict[str, float]]] = {}
    ok = results[results["error"] == ""]
    for (kind, n), group in ok.groupby(["kind", "n"], sort=True):
        values = group["ise"].to_numpy(dtype=np.float64)
        se = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
        summary.setdefault(str(kind), {})[str(n)] = {
            "mean": float(values.mean()),
            "standard_error": se,
            "n_runs": int(values.size),
            "n_failed": int(
                ((results["kind"] == kind) & (results["n"] == n)).sum() - values.size
            ),
        }
    return summary
