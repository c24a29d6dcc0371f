"""Experiment configuration: one YAML document, validated by pydantic.

Every field has a default; the defaults reproduce the synthetic
two-risk benchmark.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..basis import DEFAULT_QUANTILE_KNOTS, DEFAULT_TIME_KNOTS, BasisKind, BasisSet
from ..estimation import TrainConfig
from ..models.positivity import PositivityKind
from ..nn import NetworkSpec
from ..store import DatasetSchema
from ..synthetic.generator import CensoringKind

ConfigKind = Literal["ph", "qr", "dh", "cox", "deepsurv"]
CONFIG_KINDS: tuple[str, ...] = ("ph", "qr", "dh", "cox", "deepsurv")
# restriction presets resolve to the PH family
PRESETS: dict[str, str] = {"cox": "ph", "deepsurv": "ph"}


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DataSection(_Section):
    train: Path | None = None
    test: Path | None = None
    dataset_schema: DatasetSchema = Field(
        default_factory=DatasetSchema.synthetic, alias="schema"
    )

    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class SyntheticSection(_Section):
    n: int = Field(default=10_000, ge=0)
    test_n: int = Field(default=2_000, ge=1)
    horizon: float = Field(default=10.0, gt=0)
    censoring: CensoringKind = "administrative"


class NetworkSection(_Section):
    embedding_width: int = Field(default=10, ge=1)
    embedding_dropout: float = Field(default=0.7, ge=0, lt=1)
    hidden_widths: list[int] = Field(default_factory=lambda: [100, 100])
    hidden_dropout: float = Field(default=0.1, ge=0, lt=1)


class ModelSection(_Section):
    kind: ConfigKind = "ph"
    positivity: PositivityKind = "exp"
    basis: BasisKind = "piecewise_linear"
    # None picks the time grid for ph/dh and the -log(tau) grid for qr
    knots: list[float] | None = None
    horizon: float = Field(default=10.0, gt=0)
    event_count: int | None = Field(default=None, ge=1)
    network: NetworkSection = Field(default_factory=NetworkSection)


class EvaluationSection(_Section):
    attribute: int = Field(default=0, ge=0)
    window_width: float = Field(default=4.0, gt=0)
    targets: list[float] = Field(default_factory=lambda: [-2.0, -1.0, 0.0, 1.0, 2.0])
    times: list[float] = Field(default_factory=lambda: [2.0, 4.0, 6.0, 8.0])
    horizon: float = Field(default=10.0, gt=0)
    grid_step: float = Field(default=0.1, gt=0)
    folds: int = Field(default=5, ge=2)
    repetitions: int = Field(default=1, ge=1)
    # cross-validation compares these kinds; empty means the model section only
    compare: list[ConfigKind] = Field(default_factory=list)


class BenchmarkSection(_Section):
    kinds: list[ConfigKind] = Field(
        default_factory=lambda: ["ph", "dh", "qr", "cox", "deepsurv"]
    )
    sizes: list[int] = Field(default_factory=lambda: [1_000, 10_000])
    seeds: list[int] = Field(default_factory=lambda: list(range(20)))
    test_size: int = Field(default=1_000, ge=1)


class SurfaceSection(_Section):
    event: int = Field(default=1, ge=1)
    attribute: int = Field(default=1, ge=0)
    base: list[float] = Field(default_factory=lambda: [0.0, 0.0])
    value_min: float = -2.0
    value_max: float = 2.0
    value_count: int = Field(default=41, ge=2)
    time_step: float = Field(default=0.1, gt=0)

    @model_validator(mode="after")
    def _range(self) -> SurfaceSection:
        if self.value_max <= self.value_min:
            raise ValueError("value_max must exceed value_min")
        return self


class ExperimentConfig(_Section):
    experiment_id: str = "synthetic"
    seed: int = Field(default=0, ge=0)
    output_dir: Path | None = None
    data: DataSection = Field(default_factory=DataSection)
    synthetic: SyntheticSection = Field(default_factory=SyntheticSection)
    model: ModelSection = Field(default_factory=ModelSection)
    train: TrainConfig = Field(default_factory=TrainConfig)
    evaluation: EvaluationSection = Field(default_factory=EvaluationSection)
    benchmark: BenchmarkSection = Field(default_factory=BenchmarkSection)
    surface: SurfaceSection = Field(default_factory=SurfaceSection)


@dataclass(frozen=True)
class ResolvedModel:
    """A concrete family, network spec and per-event bases ready for training."""

    name: str
    kind: Literal["ph", "qr", "dh"]
    spec: NetworkSpec
    bases: list[BasisSet]
    positivity: PositivityKind


def resolve_model(
    section: ModelSection,
    schema: DatasetSchema,
    event_count: int,
    kind: str | None = None,
) -> ResolvedModel:
    """Expand presets and defaults into a trainable configuration.

    cox: PH with one constant basis per event and a linear network.
    deepsurv: PH with one constant basis per event and the configured network.
    """
    name = kind or section.kind
    family = PRESETS.get(name, name)
    events = section.event_count or max(event_count, 1)
    net = section.network

    if name in PRESETS:
        bases = [BasisSet.constant(section.horizon) for _ in range(events)]
    else:
        default = DEFAULT_QUANTILE_KNOTS if family == "qr" else DEFAULT_TIME_KNOTS
        knots = section.knots if section.knots is not None else default
        bases = [BasisSet.from_knots(knots, section.basis) for _ in range(events)]

    linear = name == "cox"
    spec = NetworkSpec(
        numeric_input_count=len(schema.numeric),
        boolean_input_count=len(schema.boolean),
        categorical_cardinalities=schema.cardinalities,
        embedding_width=net.embedding_width,
        embedding_dropout=0.0 if linear else net.embedding_dropout,
        hidden_widths=() if linear else tuple(net.hidden_widths),
        hidden_dropout=0.0 if linear else net.hidden_dropout,
        output_count=sum(b.size for b in bases),
    )
    spec.validate()
    return ResolvedModel(
        name=name,
        kind=family,  # type: ignore[arg-type]
        spec=spec,
        bases=bases,
        positivity=section.positivity,
    )
