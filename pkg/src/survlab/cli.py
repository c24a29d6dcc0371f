from __future__ import annotations

import contextlib
import json
import logging
import sys
from collections.abc import Iterator, Sequence
from pathlib import Path
from typing import Any, NoReturn, TypeVar

import numpy as np
import pandas as pd
import typer
from pydantic import BaseModel, ValidationError
from rich import print as rprint
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from .config import settings
from .errors import ConfigurationError, UsageError, error_class_of
from .estimation import SurvivalData
from .evaluation import (
    ChrSettings,
    MetricRow,
    build_reports,
    cross_validate,
    cumulative_hazard_surface,
    evaluate_model,
    ise_benchmark,
    oracle_cumulative_hazard_surface,
    summarize_ise,
    time_grid,
)
from .evaluation.benchmark import TEST_SEED_OFFSET
from .experiment import ExperimentConfig, ExperimentLoader, ModelFitter, resolve_model
from .logging import quiet_service_loggers, run_file_logger, setup_logging
from .nn import CovariateBatch
from .store import DatasetSchema, RunManifest, emit, ingest, load_model, save_model
from .synthetic import SyntheticSpec, oracle_survival, sample_dataset

console = Console()
app = typer.Typer(add_completion=False)
log = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
SYNTHETIC_EVENT_TYPES = 2

S = TypeVar("S", bound=BaseModel)

ConfigOpt = typer.Option(None, "--config", help="Experiment YAML (default: synthetic benchmark)")
SeedOpt = typer.Option(None, "--seed", help="Override the experiment seed")
OutOpt = typer.Option(None, "--out", help="Run output directory")
ThreadsOpt = typer.Option(None, "--threads", help="Parallel workers (-1: all cores)")
IterationsOpt = typer.Option(None, "--iterations", help="Optimizer iterations")


@app.callback()
def _main():
    setup_logging()


# --- helpers ------------------------------------------------------------------


def _override(section: S, **updates: Any) -> S:
    """Re-validate a config section with CLI overrides applied."""
    updates = {k: v for k, v in updates.items() if v is not None}
    if not updates:
        return section
    try:
        return type(section).model_validate({**section.model_dump(), **updates})
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(p) for p in first["loc"])
        raise ConfigurationError(f"{loc}: {first['msg']}") from None


def _load_config(
    config: Path | None, seed: int | None, iterations: int | None = None
) -> ExperimentConfig:
    cfg = ExperimentLoader.load_yaml(config) if config else ExperimentConfig()
    if seed is not None:
        if seed < 0:
            raise UsageError("--seed must be >= 0")
        cfg = cfg.model_copy(update={"seed": seed})
    if iterations is not None:
        cfg = cfg.model_copy(update={"train": _override(cfg.train, iterations=iterations)})
    return cfg


def _output_dir(cfg: ExperimentConfig, command: str, out: Path | None) -> Path:
    if out is not None:
        return out
    if cfg.output_dir is not None:
        return cfg.output_dir
    return settings.runs_dir / f"{cfg.experiment_id}-{command}"


def _threads(threads: int | None) -> int:
    value = threads if threads is not None else settings.survlab_threads
    if value == 0:
        raise UsageError("--threads must be nonzero (-1 uses every core)")
    return value


def _is_synthetic(schema: DatasetSchema) -> bool:
    return schema == DatasetSchema.synthetic()


def _synthetic_sample(cfg: ExperimentConfig, which: str) -> SurvivalData:
    syn = cfg.synthetic
    n, seed = (syn.n, cfg.seed) if which == "train" else (syn.test_n, cfg.seed + TEST_SEED_OFFSET)
    spec = SyntheticSpec(n=n, seed=seed, horizon=syn.horizon, censoring=syn.censoring)
    log.info(f"Sampling synthetic {which} data: n={spec.n}, seed={spec.seed}")
    return sample_dataset(spec)


def _load_data(
    cfg: ExperimentConfig, which: str, path: Path | None
) -> tuple[SurvivalData, bool]:
    """Dataset from a CSV, else a synthetic sample. Second item: sampled or not."""
    schema = cfg.data.dataset_schema
    path = path or (cfg.data.train if which == "train" else cfg.data.test)
    if path is not None:
        return ingest(path, schema), False
    if not _is_synthetic(schema):
        raise UsageError(f"No {which} dataset configured for a non-synthetic schema")
    return _synthetic_sample(cfg, which), True


def _fitter(cfg: ExperimentConfig, event_count: int, kind: str | None = None) -> ModelFitter:
    resolved = resolve_model(cfg.model, cfg.data.dataset_schema, event_count, kind=kind)
    return ModelFitter(resolved=resolved, train_config=cfg.train)


def _event_count(data: SurvivalData, sampled: bool) -> int:
    return SYNTHETIC_EVENT_TYPES if sampled else data.event_count


def _chr_settings(cfg: ExperimentConfig) -> ChrSettings:
    ev = cfg.evaluation
    return ChrSettings(
        attribute=ev.attribute,
        width=ev.window_width,
        targets=tuple(ev.targets),
        times=tuple(ev.times),
    )


def _write_csv(df: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="nan")
    return path


def _write_json(payload: dict, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    return path


def _parse_numbers(raw: str | None) -> list[float] | None:
    if not raw:
        return None
    try:
        return [float(p) for p in raw.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"Expected comma-separated numbers, got '{raw}'") from None


def _metrics_frame(rows: Sequence[MetricRow], **keys: int) -> pd.DataFrame:
    columns = ["metric", "config", *keys, "time", "window", "value"]
    records = [
        {
            "metric": r.metric,
            "config": r.config,
            **keys,
            "time": r.time,
            "window": np.nan if r.window is None else r.window,
            "value": r.value,
        }
        for r in rows
    ]
    return pd.DataFrame(records, columns=columns)


def _fail(command: str, e: Exception) -> NoReturn:
    rprint(f"[red]{command} failed: {escape(str(e))}[/red]")
    typer.echo(f"ERROR {error_class_of(e)}: {e}", err=True)
    raise typer.Exit(code=1) from None


@contextlib.contextmanager
def _experiment_run(
    command: str, cfg: ExperimentConfig, out: Path | None
) -> Iterator[RunManifest]:
    """Output directory with run.log and manifest.json; failures exit with code 1."""
    output_dir = _output_dir(cfg, command, out)
    manifest = RunManifest(
        command=command,
        output_dir=output_dir,
        seed=cfg.seed,
        config=cfg.model_dump(mode="json", by_alias=True),
    )
    with run_file_logger(output_dir / "run.log"), quiet_service_loggers():
        log.info(f"{command}: experiment={cfg.experiment_id} seed={cfg.seed} out={output_dir}")
        try:
            yield manifest
        except Exception as e:
            if error_class_of(e) == "internal-error":
                log.exception(f"{command} failed")
            else:
                log.error(f"{command} failed: {e}")
            manifest.finish("fail", error_class_of(e), str(e))
            manifest.persist()
            _fail(command, e)
        manifest.finish("success")
        manifest.persist()
    print("RUN_JSON: " + json.dumps({"command": command, "output_dir": str(output_dir), "status": "success"}))


# --- commands -----------------------------------------------------------------


@app.command("about")
def about():
    rprint(
        Panel.fit(
            "[b]surv-lab[/b]\n"
            "- Neural survival models over time bases (ph / qr / dh, cox / deepsurv presets)\n"
            "- Synthetic two-risk benchmark with a known ground truth\n"
            "- Calibration-in-the-large (CHR) evaluation and repeated cross-validation\n",
            title="About",
        )
    )


@app.command("config")
def show_config(config: Path | None = ConfigOpt, seed: int | None = SeedOpt):
    """Print the fully resolved experiment configuration as YAML."""
    try:
        cfg = _load_config(config, seed)
    except Exception as e:
        _fail("config", e)
    print(ExperimentLoader.dump_yaml(cfg), end="")


@app.command("simulate")
def simulate(
    config: Path | None = ConfigOpt,
    seed: int | None = SeedOpt,
    out: Path | None = OutOpt,
    n: int | None = typer.Option(None, "--n", help="Training sample size"),
):
    """Sample the synthetic benchmark into train.csv and test.csv."""
    try:
        cfg = _load_config(config, seed)
        cfg = cfg.model_copy(update={"synthetic": _override(cfg.synthetic, n=n)})
    except Exception as e:
        _fail("simulate", e)

    with _experiment_run("simulate", cfg, out) as run:
        schema = DatasetSchema.synthetic()
        with console.status("[bold green]Sampling synthetic data..."):
            train = _synthetic_sample(cfg, "train")
            test = _synthetic_sample(cfg, "test")
        run.add_artifact("train", emit(train, schema, run.output_dir / "train.csv"))
        run.add_artifact("test", emit(test, schema, run.output_dir / "test.csv"))
        rprint(
            Panel.fit(
                f"train: {len(train)} records ({train.uncensored.size} events)\n"
                f"test:  {len(test)} records ({test.uncensored.size} events)\n"
                f"dir:   [b]{run.output_dir}[/b]",
                title="simulate",
            )
        )


@app.command("train")
def train_cmd(
    config: Path | None = ConfigOpt,
    seed: int | None = SeedOpt,
    out: Path | None = OutOpt,
    data: Path | None = typer.Option(None, "--data", help="Training dataset CSV"),
    model_kind: str | None = typer.Option(None, "--model-kind", help="ph | qr | dh | cox | deepsurv"),
    iterations: int | None = IterationsOpt,
):
    """Fit one model; writes model.json and loss_trace.csv."""
    try:
        cfg = _load_config(config, seed, iterations)
        cfg = cfg.model_copy(update={"model": _override(cfg.model, kind=model_kind)})
    except Exception as e:
        _fail("train", e)

    with _experiment_run("train", cfg, out) as run:
        dataset, sampled = _load_data(cfg, "train", data)
        fitter = _fitter(cfg, _event_count(dataset, sampled))
        with console.status(
            f"[bold green]Training {cfg.model.kind} ({cfg.train.iterations} iterations)..."
        ):
            model, trace = fitter.fit(dataset, cfg.seed)
        run.add_artifact("model", save_model(model, run.output_dir / "model.json"))
        trace_df = pd.DataFrame(trace, columns=["iteration", "objective"])
        run.add_artifact("loss_trace", _write_csv(trace_df, run.output_dir / "loss_trace.csv"))
        final = f"{trace[-1][1]:.6f}" if trace else "-"
        rprint(
            Panel.fit(
                f"config: {cfg.model.kind} ({model.kind})\n"
                f"records: {len(dataset)} ({dataset.uncensored.size} events)\n"
                f"final objective: {final}\n"
                f"model: [b]{run.output_dir / 'model.json'}[/b]",
                title="train",
            )
        )


@app.command("evaluate")
def evaluate(
    config: Path | None = ConfigOpt,
    seed: int | None = SeedOpt,
    out: Path | None = OutOpt,
    model_path: Path = typer.Option(..., "--model", help="model.json written by `train`"),
    data: Path | None = typer.Option(None, "--data", help="Test dataset CSV"),
    name: str | None = typer.Option(None, "--name", help="Config label in the metrics file"),
):
    """CHR error metrics, plus ISE against the oracle on synthetic data."""
    try:
        cfg = _load_config(config, seed)
    except Exception as e:
        _fail("evaluate", e)

    with _experiment_run("evaluate", cfg, out) as run:
        model = load_model(model_path)
        dataset, sampled = _load_data(cfg, "test", data)
        ev = cfg.evaluation
        label = name or cfg.model.kind
        oracle = oracle_survival if _is_synthetic(cfg.data.dataset_schema) else None
        with console.status("[bold green]Evaluating..."):
            rows = evaluate_model(
                model, dataset, _chr_settings(cfg), label, oracle, ev.horizon, ev.grid_step
            )
        run.add_artifact("metrics", _write_csv(_metrics_frame(rows), run.output_dir / "metrics.csv"))
        reports = build_reports([(0, 0, rows)], [], [label])
        summary = {label: {r.metric: r.to_dict() for r in reports}}
        run.add_artifact("summary", _write_json(summary, run.output_dir / "summary.json"))

        table = Table(title=f"{label} on {len(dataset)} records")
        table.add_column("metric")
        table.add_column("max over time", justify="right")
        for r in reports:
            table.add_row(r.metric, f"{r.mean:.6g}")
        console.print(table)


@app.command("cv")
def cv(
    config: Path | None = ConfigOpt,
    seed: int | None = SeedOpt,
    out: Path | None = OutOpt,
    threads: int | None = ThreadsOpt,
    data: Path | None = typer.Option(None, "--data", help="Dataset CSV"),
    folds: int | None = typer.Option(None, "--folds", help="Folds per repetition"),
    repetitions: int | None = typer.Option(None, "--repetitions", help="Shuffled repetitions"),
    iterations: int | None = IterationsOpt,
):
    """Repeated k-fold cross-validation of one or more model configs."""
    try:
        cfg = _load_config(config, seed, iterations)
        cfg = cfg.model_copy(
            update={"evaluation": _override(cfg.evaluation, folds=folds, repetitions=repetitions)}
        )
        workers = _threads(threads)
    except Exception as e:
        _fail("cv", e)

    with _experiment_run("cv", cfg, out) as run:
        dataset, sampled = _load_data(cfg, "train", data)
        events = _event_count(dataset, sampled)
        ev = cfg.evaluation
        kinds = ev.compare or [cfg.model.kind]
        fitters = {k: _fitter(cfg, events, kind=k) for k in kinds}
        oracle = oracle_survival if _is_synthetic(cfg.data.dataset_schema) else None
        with console.status(f"[bold green]Cross-validating {', '.join(kinds)}..."):
            result = cross_validate(
                dataset,
                fitters,
                _chr_settings(cfg),
                folds=ev.folds,
                repetitions=ev.repetitions,
                seed=cfg.seed,
                threads=workers,
                oracle=oracle,
                horizon=ev.horizon,
                step=ev.grid_step,
            )
        frames = [_metrics_frame(rows, repetition=rep, fold=fold) for rep, fold, rows in result.runs]
        metrics = (
            pd.concat(frames, ignore_index=True)
            if frames
            else _metrics_frame([], repetition=0, fold=0)
        )
        run.add_artifact("metrics", _write_csv(metrics, run.output_dir / "metrics.csv"))
        summary = {
            "configs": result.summary(),
            "failures": [
                {
                    "config": f.config,
                    "repetition": f.repetition,
                    "fold": f.fold,
                    "error_class": f.error_class,
                    "message": f.message,
                }
                for f in result.failures
            ],
        }
        run.add_artifact("summary", _write_json(summary, run.output_dir / "summary.json"))

        table = Table(title=f"Cross-validation {ev.repetitions}x{ev.folds}")
        for col in ("config", "metric", "max over time", "±95%", "runs", "failed"):
            table.add_column(col)
        for r in result.reports:
            table.add_row(
                r.config,
                r.metric,
                f"{r.mean:.6g}",
                f"{r.half_width:.3g}",
                str(r.n_runs),
                str(r.n_failed),
            )
        console.print(table)
        if result.failures:
            rprint(f"[yellow]{len(result.failures)} run(s) failed; see summary.json[/yellow]")


@app.command("predict")
def predict(
    config: Path | None = ConfigOpt,
    seed: int | None = SeedOpt,
    out: Path | None = OutOpt,
    model_path: Path = typer.Option(..., "--model", help="model.json written by `train`"),
    data: Path | None = typer.Option(None, "--data", help="Dataset CSV of subjects"),
    times: str | None = typer.Option(None, "--times", help="Comma-separated times (default: evaluation grid)"),
):
    """Per-subject survival S(t, x) on a time grid."""
    try:
        cfg = _load_config(config, seed)
        grid = _parse_numbers(times)
    except Exception as e:
        _fail("predict", e)

    with _experiment_run("predict", cfg, out) as run:
        model = load_model(model_path)
        dataset, _ = _load_data(cfg, "test", data)
        t = np.asarray(
            grid if grid is not None else time_grid(cfg.evaluation.horizon, cfg.evaluation.grid_step),
            dtype=np.float64,
        )
        curves = model.survival_curves(dataset.covariates, t)
        df = pd.DataFrame(
            {
                "subject": np.repeat(np.arange(len(dataset)), t.size),
                "time": np.tile(t, len(dataset)),
                "survival": curves.reshape(-1),
            }
        )
        run.add_artifact("predictions", _write_csv(df, run.output_dir / "predictions.csv"))
        rprint(
            Panel.fit(
                f"{len(dataset)} subjects x {t.size} times\n"
                f"predictions: [b]{run.output_dir / 'predictions.csv'}[/b]",
                title="predict",
            )
        )


@app.command("benchmark")
def benchmark(
    config: Path | None = ConfigOpt,
    seed: int | None = SeedOpt,
    out: Path | None = OutOpt,
    threads: int | None = ThreadsOpt,
    sizes: str | None = typer.Option(None, "--sizes", help="Comma-separated training sizes"),
    seeds: int | None = typer.Option(None, "--seeds", help="Seeds per size, counted from --seed"),
    iterations: int | None = IterationsOpt,
):
    """ISE against the synthetic oracle versus training-set size, per model kind."""
    try:
        cfg = _load_config(config, seed, iterations)
        parsed = _parse_numbers(sizes)
        bench = _override(
            cfg.benchmark,
            sizes=[int(s) for s in parsed] if parsed is not None else None,
            seeds=list(range(cfg.seed, cfg.seed + seeds)) if seeds is not None else None,
        )
        # the benchmark always runs on the synthetic schema
        data_section = cfg.data.model_copy(update={"dataset_schema": DatasetSchema.synthetic()})
        cfg = cfg.model_copy(update={"benchmark": bench, "data": data_section})
        workers = _threads(threads)
    except Exception as e:
        _fail("benchmark", e)

    with _experiment_run("benchmark", cfg, out) as run:
        fitters = {k: _fitter(cfg, SYNTHETIC_EVENT_TYPES, kind=k) for k in bench.kinds}
        with console.status("[bold green]Running ISE benchmark..."):
            results = ise_benchmark(
                fitters,
                bench.sizes,
                bench.seeds,
                test_size=bench.test_size,
                horizon=cfg.synthetic.horizon,
                step=cfg.evaluation.grid_step,
                threads=workers,
            )
        run.add_artifact("ise", _write_csv(results, run.output_dir / "ise.csv"))
        summary = summarize_ise(results)
        run.add_artifact("ise_summary", _write_json(summary, run.output_dir / "ise_summary.json"))

        table = Table(title="Mean ISE (± standard error)")
        table.add_column("kind")
        for n in bench.sizes:
            table.add_column(f"n={n}", justify="right")
        for kind in bench.kinds:
            cells = []
            for n in bench.sizes:
                s = summary.get(kind, {}).get(str(n))
                cells.append(f"{s['mean']:.5f} ± {s['standard_error']:.5f}" if s else "-")
            table.add_row(kind, *cells)
        console.print(table)


@app.command("surface")
def surface(
    config: Path | None = ConfigOpt,
    seed: int | None = SeedOpt,
    out: Path | None = OutOpt,
    model_path: Path = typer.Option(..., "--model", help="model.json written by `train`"),
):
    """Cumulative hazard over a grid of one numeric covariate and time."""
    try:
        cfg = _load_config(config, seed)
    except Exception as e:
        _fail("surface", e)

    with _experiment_run("surface", cfg, out) as run:
        model = load_model(model_path)
        sf = cfg.surface
        schema = cfg.data.dataset_schema
        if len(sf.base) != len(schema.numeric) or schema.boolean or schema.categorical:
            raise UsageError(
                "surface.base must give every numeric covariate of a numeric-only schema"
            )
        base = CovariateBatch.from_arrays(np.asarray([sf.base], dtype=np.float64))
        values = np.linspace(sf.value_min, sf.value_max, sf.value_count)
        times = time_grid(cfg.evaluation.horizon, sf.time_step)
        frames = [
            cumulative_hazard_surface(model, base, sf.attribute, values, times, sf.event).assign(
                source="model"
            )
        ]
        if _is_synthetic(schema):
            truth = oracle_cumulative_hazard_surface(base, sf.attribute, values, times, sf.event)
            frames.append(truth.assign(source="oracle"))
        df = pd.concat(frames, ignore_index=True)[["source", "value", "time", "cumulative_hazard"]]
        run.add_artifact("surface", _write_csv(df, run.output_dir / "surface.csv"))
        rprint(
            Panel.fit(
                f"event {sf.event}, covariate {sf.attribute} in [{sf.value_min:g}, {sf.value_max:g}]\n"
                f"surface: [b]{run.output_dir / 'surface.csv'}[/b]",
                title="surface",
            )
        )


def main() -> None:
    """Module entrypoint (enables `python -m survlab.cli ...`)."""
    try:
        app()
    except KeyboardInterrupt:
        sys.exit(130)


if __name__ == "__main__":
    main()
