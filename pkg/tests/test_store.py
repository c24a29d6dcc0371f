import json
from pathlib import Path

import numpy as np
import pytest

from survlab.basis import DEFAULT_TIME_KNOTS, BasisSet
from survlab.errors import DataError, DatasetNotFoundError, ModelFileError
from survlab.estimation import SurvivalData
from survlab.models import PhMnnModel, PositivityMap, StepFunction, create_model
from survlab.nn import CovariateBatch, NetworkSpec, init_params
from survlab.store import (
    MODEL_FORMAT,
    CategoricalColumn,
    DatasetSchema,
    RunManifest,
    emit,
    ingest,
    load_model,
    model_to_dict,
    save_model,
    sha256_of,
)


def _mixed_schema() -> DatasetSchema:
    return DatasetSchema(
        numeric=["age", "dose"],
        boolean=["smoker"],
        categorical=[CategoricalColumn(name="site", cardinality=3)],
    )


def _mixed_data(n: int = 25, seed: int = 0) -> SurvivalData:
    rng = np.random.default_rng(seed)
    event = rng.integers(0, 2, n)
    return SurvivalData.from_arrays(
        rng.uniform(0.0, 10.0, n),
        event,
        rng.integers(1, 3, n),
        numeric=rng.normal(size=(n, 2)) / 3.0,
        boolean=rng.integers(0, 2, (n, 1)),
        categorical=rng.integers(0, 3, (n, 1)),
    )


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def test_emit_then_ingest_is_exact(tmp_path):
    schema = _mixed_schema()
    data = _mixed_data()
    path = emit(data, schema, tmp_path / "d.csv")
    back = ingest(path, schema)
    np.testing.assert_array_equal(back.time, data.time)
    np.testing.assert_array_equal(back.event, data.event)
    np.testing.assert_array_equal(back.event_type, data.event_type)
    np.testing.assert_array_equal(back.covariates.numeric, data.covariates.numeric)
    np.testing.assert_array_equal(back.covariates.boolean, data.covariates.boolean)
    np.testing.assert_array_equal(back.covariates.categorical, data.covariates.categorical)
    header = path.read_text(encoding="utf-8").splitlines()[0]
    assert header == "age,dose,smoker,site,time,event_type,event"


def test_bad_event_indicator_cites_line_and_column(tmp_path):
    path = _write(
        tmp_path / "d.csv",
        "x0,x1,time,event_type,event\n0.1,0.2,1.0,1,1\n0.3,0.4,2.0,1,2\n",
    )
    with pytest.raises(DataError) as info:
        ingest(path, DatasetSchema.synthetic())
    message = str(info.value)
    assert "line 3" in message
    assert "'event'" in message


def test_event_without_type_is_rejected(tmp_path):
    path = _write(tmp_path / "d.csv", "x0,x1,time,event_type,event\n0,0,1.0,0,1\n")
    with pytest.raises(DataError, match="line 2, column 'event_type'"):
        ingest(path, DatasetSchema.synthetic())


def test_censored_rows_keep_type_zero(tmp_path):
    path = _write(tmp_path / "d.csv", "x0,x1,time,event_type,event\n0,0,4.0,2,0\n")
    data = ingest(path, DatasetSchema.synthetic())
    assert data.event_type.tolist() == [0]


@pytest.mark.parametrize(
    ("row", "column"),
    [
        ("abc,0,1.0,1,1", "x0"),
        ("0,inf,1.0,1,1", "x1"),
        ("0,0,-1.0,1,1", "time"),
        ("0,0,1.0,1.5,1", "event_type"),
    ],
)
def test_invalid_values(tmp_path, row, column):
    path = _write(tmp_path / "d.csv", f"x0,x1,time,event_type,event\n{row}\n")
    with pytest.raises(DataError, match=f"column '{column}'"):
        ingest(path, DatasetSchema.synthetic())


def test_categorical_out_of_range(tmp_path):
    path = _write(
        tmp_path / "d.csv",
        "age,dose,smoker,site,time,event_type,event\n0,0,1,0,1.0,1,1\n0,0,0,3,1.0,1,1\n",
    )
    with pytest.raises(DataError, match="line 3, column 'site'"):
        ingest(path, _mixed_schema())


def test_boolean_must_be_zero_or_one(tmp_path):
    path = _write(
        tmp_path / "d.csv",
        "age,dose,smoker,site,time,event_type,event\n0,0,2,0,1.0,1,1\n",
    )
    with pytest.raises(DataError, match="column 'smoker'"):
        ingest(path, _mixed_schema())


def test_header_mismatch(tmp_path):
    path = _write(tmp_path / "d.csv", "x0,time,event_type,event\n0,1.0,1,1\n")
    with pytest.raises(DataError, match="line 1"):
        ingest(path, DatasetSchema.synthetic())


def test_missing_and_empty_files(tmp_path):
    with pytest.raises(DatasetNotFoundError):
        ingest(tmp_path / "nope.csv", DatasetSchema.synthetic())
    with pytest.raises(DataError):
        ingest(_write(tmp_path / "empty.csv", ""), DatasetSchema.synthetic())


def test_schema_rejects_duplicate_columns():
    with pytest.raises(ValueError):
        DatasetSchema(numeric=["time"])


# --- model files ---------------------------------------------------------------


def _ph_model() -> PhMnnModel:
    spec = NetworkSpec(
        numeric_input_count=2,
        boolean_input_count=1,
        categorical_cardinalities=(3,),
        embedding_width=2,
        hidden_widths=(4,),
        output_count=12,
    )
    bases = [BasisSet.from_knots(DEFAULT_TIME_KNOTS), BasisSet.from_knots(DEFAULT_TIME_KNOTS)]
    model = create_model("ph", init_params(spec, seed=2), bases, PositivityMap("softplus"))
    return model.with_baselines(
        [
            StepFunction.from_jumps([0.5, 2.25, 9.0], [0.1, 1 / 3, np.inf]),
            StepFunction.empty(),
        ]
    )


def test_model_round_trip_is_bit_exact(tmp_path):
    model = _ph_model()
    path = save_model(model, tmp_path / "model.json")
    assert "Infinity" in path.read_text(encoding="utf-8")
    back = load_model(path)
    assert isinstance(back, PhMnnModel)
    assert back.params.equals(model.params)
    assert back.positivity.kind == "softplus"
    assert back.bases == model.bases
    np.testing.assert_array_equal(back.baselines[0].jumps, model.baselines[0].jumps)
    assert len(back.baselines[1]) == 0

    x = CovariateBatch.from_arrays([[0.2, -0.4]], [[1]], [[2]])
    np.testing.assert_array_equal(
        back.survival_curves(x, [1.0, 5.0, 9.5]), model.survival_curves(x, [1.0, 5.0, 9.5])
    )


def test_model_file_errors(tmp_path):
    with pytest.raises(ModelFileError):
        load_model(tmp_path / "missing.json")
    with pytest.raises(ModelFileError):
        load_model(_write(tmp_path / "junk.json", "{not json"))

    doc = model_to_dict(_ph_model())
    assert doc["format"] == MODEL_FORMAT
    doc["format"] = "other/9"
    with pytest.raises(ModelFileError):
        load_model(_write(tmp_path / "old.json", json.dumps(doc)))

    doc = model_to_dict(_ph_model())
    doc["network"]["biases"][0] = [0.0]
    with pytest.raises(ModelFileError):
        load_model(_write(tmp_path / "shape.json", json.dumps(doc)))

    doc = model_to_dict(_ph_model())
    doc["kind"] = "weibull"
    with pytest.raises(ModelFileError):
        load_model(_write(tmp_path / "kind.json", json.dumps(doc)))


# --- run manifest ------------------------------------------------------------------


def test_manifest_records_artifact_hashes(tmp_path):
    out = tmp_path / "run"
    manifest = RunManifest(command="simulate", output_dir=out, seed=3, config={"n": 5})
    out.mkdir()
    artifact = _write(out / "train.csv", "a,b\n1,2\n")
    manifest.add_artifact("train", artifact)
    manifest.add_artifact("never_written", out / "ghost.csv")
    manifest.finish("success")
    path = manifest.persist()

    doc = json.loads(path.read_text(encoding="utf-8"))
    assert doc["status"] == "success"
    assert doc["seed"] == 3
    assert doc["output_dir"].endswith("/")
    by_name = {a["name"]: a for a in doc["artifacts"]}
    assert by_name["train"]["sha256"] == sha256_of(artifact)
    assert by_name["train"]["bytes"] == artifact.stat().st_size
    assert "sha256" not in by_name["never_written"]


def test_manifest_failure_fields(tmp_path):
    manifest = RunManifest(command="train", output_dir=tmp_path, seed=0)
    manifest.finish("fail", "dataset-not-found", "Dataset not found: x.csv")
    doc = json.loads(manifest.persist().read_text(encoding="utf-8"))
    assert doc["status"] == "fail"
    assert doc["error_class"] == "dataset-not-found"
    assert doc["ended_at"] is not None
