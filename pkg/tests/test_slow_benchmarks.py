"""Long statistical checks on the synthetic benchmark. Opt in with RUN_SLOW=1."""

import os

import numpy as np
import pytest
from scipy.integrate import trapezoid

from survlab.evaluation import ise_benchmark, summarize_ise
from survlab.experiment import ExperimentConfig, ModelFitter, resolve_model
from survlab.nn import CovariateBatch
from survlab.store import DatasetSchema
from survlab.synthetic import (
    SyntheticSpec,
    sample_dataset,
    true_cumulative_hazards,
    true_hazards,
)

pytestmark = [
    pytest.mark.slow,
    pytest.mark.skipif(os.environ.get("RUN_SLOW") != "1", reason="set RUN_SLOW=1"),
]


def _fitter(kind: str) -> ModelFitter:
    cfg = ExperimentConfig()
    return ModelFitter(resolve_model(cfg.model, DatasetSchema.synthetic(), 2, kind=kind), cfg.train)


def _incidences_at_horizon(x: np.ndarray, horizon: float = 10.0) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative incidence of each cause at the horizon, by trapezoid on a fine grid."""
    grid = np.linspace(0.0, horizon, 4001)
    out1, out2 = [], []
    for chunk in np.array_split(x, max(1, x.shape[0] // 5000)):
        lam1, lam2 = true_hazards(grid[None, :], chunk[:, None, :])
        cum1, cum2 = true_cumulative_hazards(grid[None, :], chunk[:, None, :])
        survival = np.exp(-(cum1 + cum2))
        out1.append(trapezoid(lam1 * survival, grid, axis=1))
        out2.append(trapezoid(lam2 * survival, grid, axis=1))
    return np.concatenate(out1), np.concatenate(out2)


def test_event_one_share_matches_quadrature():
    data = sample_dataset(SyntheticSpec(n=100_000, seed=17))
    events = data.event_type[data.event == 1]
    share = float(np.mean(events == 1))
    cif1, cif2 = _incidences_at_horizon(data.covariates.numeric)
    expected = float(cif1.sum() / (cif1.sum() + cif2.sum()))
    se = np.sqrt(expected * (1.0 - expected) / events.size)
    assert abs(share - expected) <= 3.0 * se


def test_mnn_families_beat_restrictions_and_improve_with_size():
    kinds = ["ph", "dh", "qr", "cox", "deepsurv"]
    results = ise_benchmark(
        {k: _fitter(k) for k in kinds},
        sizes=[1_000, 10_000],
        seeds=list(range(20)),
        test_size=1_000,
        threads=-1,
    )
    summary = summarize_ise(results)

    def gap_ok(better: str, worse: str, n: str = "10000") -> bool:
        a, b = summary[better][n], summary[worse][n]
        pooled = np.hypot(a["standard_error"], b["standard_error"])
        return b["mean"] - a["mean"] > 2.0 * pooled

    for mnn in ("ph", "dh", "qr"):
        assert gap_ok(mnn, "cox"), summary
        assert gap_ok(mnn, "deepsurv"), summary
    assert summary["ph"]["10000"]["mean"] < summary["ph"]["1000"]["mean"]


def test_ph_captures_time_dependent_effect():
    train = sample_dataset(SyntheticSpec(n=10_000, seed=0))
    ph = _fitter("ph")(train, 0)
    cox = _fitter("cox")(train, 0)

    # x1 only acts on cause 1 after the switch time
    x = CovariateBatch.from_arrays([[0.0, -1.0], [0.0, 1.0]])
    early = ph.cumulative_hazard(x, 4.5)[:, 0]
    late = ph.cumulative_hazard(x, 9.5)[:, 0] - ph.cumulative_hazard(x, 5.5)[:, 0]
    early_effect = np.log(early[1] / early[0])
    late_effect = np.log(late[1] / late[0])
    assert late_effect > 0.0
    assert late_effect > early_effect

    times = np.linspace(0.5, 9.5, 19)
    cox_ratio = np.array([cox.hazard_ratio(x, t)[:, 0] for t in times])
    ph_ratio = np.array([ph.hazard_ratio(x, t)[:, 0] for t in times])
    assert np.all(cox_ratio == cox_ratio[0])
    assert ph_ratio[:, 1].var() > cox_ratio[:, 1].var()
