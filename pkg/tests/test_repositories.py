"""
Tests for CSV and model persistence
"""
import json

import numpy as np
import pandas as pd
import pytest

from src.config.constants import DATASET_COLUMNS, MODEL_FORMAT_VERSION, OUTAGE_COLUMNS, SWEEP_COLUMNS
from src.error_trace.exceptions import ContractViolationError, StorageError
from src.infrastructure.cache import InMemoryCacheManager
from src.infrastructure.repositories.dataset_repository import DatasetRepository
from src.infrastructure.repositories.model_repository import ModelRepository
from src.models import outage_predictor
from src.numerics.streams import stream


@pytest.fixture
def repository():
    return DatasetRepository()


@pytest.fixture
def model():
    theta = outage_predictor.init_parameters(stream(3, 0))
    return outage_predictor.build_model(
        theta,
        norm_min=np.array([-10.0, -15.0, 0.5, 0.5, 0.5, 0.5, 2.0]),
        norm_max=np.array([10.0, 40.0, 2.0, 2.0, 2.0, 2.0, 64.0]),
        metadata={"seed": 3, "validation_mse": 1.25e-4},
    )


class TestDatasetRepository:

    def test_write_and_detect_schemas(self, repository, output_dir):
        tables = {
            "sweep": pd.DataFrame([[0.0, "exact_numeric", 0.1, 1e-9]], columns=SWEEP_COLUMNS),
            "outage": pd.DataFrame([["monte_carlo", 0.1, 0.01, "wide_ci"]], columns=OUTAGE_COLUMNS),
            "dataset": repository.records_frame([[0.0, 10.0, 1.0, 1.0, 1.0, 1.0, 4.0, 0.2]]),
        }
        for name, frame in tables.items():
            path = repository.write_frame(frame, output_dir / "nested" / f"{name}.csv")
            assert repository.detect_schema(repository.read_frame(path)) == name

    def test_unknown_header(self, repository):
        with pytest.raises(ContractViolationError):
            repository.detect_schema(pd.DataFrame(columns=["a", "b"]))

    def test_floats_round_trip(self, repository, output_dir):
        values = [0.1, 1.0 / 3.0, 2.5e-17]
        frame = repository.records_frame([[v, 0.0, 1.0, 1.0, 1.0, 1.0, 4.0, v] for v in values])
        path = repository.write_dataset(frame, output_dir / "dataset.csv")
        assert repository.read_dataset(path)["p_out"].to_numpy() == pytest.approx(values, rel=1e-15)

    def test_append_writes_header_once(self, repository, output_dir):
        path = output_dir / "dataset.csv"
        row = [0.0, 10.0, 1.0, 1.0, 1.0, 1.0, 4.0, 0.2]
        repository.append_frame(repository.records_frame([row]), path)
        repository.append_frame(repository.records_frame([row, row]), path)
        frame = repository.read_dataset(path)
        assert len(frame) == 3
        assert list(frame.columns) == DATASET_COLUMNS

    def test_dataset_validation(self, repository, output_dir):
        bad_target = output_dir / "bad_target.csv"
        repository.write_frame(repository.records_frame([[0.0, 10.0, 1.0, 1.0, 1.0, 1.0, 4.0, 1.5]]), bad_target)
        with pytest.raises(ContractViolationError):
            repository.read_dataset(bad_target)

        bad_header = output_dir / "bad_header.csv"
        repository.write_frame(pd.DataFrame([[1, 2]], columns=["x", "y"]), bad_header)
        with pytest.raises(ContractViolationError):
            repository.read_dataset(bad_header)

    def test_missing_file(self, repository, output_dir):
        with pytest.raises(StorageError) as excinfo:
            repository.read_frame(output_dir / "absent.csv")
        assert excinfo.value.exit_code == 4

    def test_unwritable_target(self, repository, output_dir):
        blocker = output_dir / "blocker"
        blocker.write_text("not a directory")
        with pytest.raises(StorageError):
            repository.write_frame(pd.DataFrame({"a": [1]}), blocker / "out.csv")


class TestModelRepository:

    def test_round_trip(self, model, output_dir):
        repository = ModelRepository()
        path = repository.save(model, output_dir / "models" / "model.json")
        loaded = repository.load(path)
        assert loaded.layer_sizes == model.layer_sizes
        for a, b in zip(loaded.weights + loaded.biases, model.weights + model.biases):
            assert np.array_equal(a, b)
        assert np.array_equal(loaded.norm_min, model.norm_min)
        assert loaded.metadata["validation_mse"] == 1.25e-4

    def test_document_layout(self, model, output_dir):
        path = ModelRepository().save(model, output_dir / "model.json")
        document = json.loads(path.read_text())
        assert document["version"] == MODEL_FORMAT_VERSION
        assert document["activation"] == "tanh"
        assert len(document["weights"]) == 4
        assert np.array(document["weights"][0]["w"]).shape == (20, 7)

    def test_newer_version_still_loads(self, model, output_dir):
        path = ModelRepository().save(model, output_dir / "model.json")
        document = json.loads(path.read_text())
        document["version"] = MODEL_FORMAT_VERSION + 1
        document["unknown_field"] = "ignored"
        path.write_text(json.dumps(document))
        loaded = ModelRepository().load(path)
        assert loaded.n_parameters == 1431

    def test_unsupported_activation(self, model, output_dir):
        path = ModelRepository().save(model, output_dir / "model.json")
        document = json.loads(path.read_text())
        document["activation"] = "relu"
        path.write_text(json.dumps(document))
        with pytest.raises(ContractViolationError):
            ModelRepository().load(path)

    def test_malformed_document(self, output_dir):
        path = output_dir / "model.json"
        path.write_text("{\"weights\": 3}")
        with pytest.raises(StorageError):
            ModelRepository().load(path)

    def test_wrong_layer_shape(self, model, output_dir):
        path = ModelRepository().save(model, output_dir / "model.json")
        document = json.loads(path.read_text())
        document["weights"][1]["b"] = document["weights"][1]["b"][:-1]
        path.write_text(json.dumps(document))
        with pytest.raises(ContractViolationError):
            ModelRepository().load(path)

    def test_missing_model(self, output_dir):
        with pytest.raises(StorageError):
            ModelRepository().load(output_dir / "absent.json")


class TestCache:

    def test_prefixes_keep_entries_apart(self):
        cache = InMemoryCacheManager()
        cache.set("k", 1, prefix="pdf_x")
        cache.set("k", 2, prefix="pdf_y")
        assert cache.get("k", prefix="pdf_x") == 1
        assert cache.get("k", prefix="pdf_y") == 2
        cache.delete("k", prefix="pdf_x")
        assert cache.get("k", prefix="pdf_x") is None
        assert len(cache) == 1

    def test_compute_once(self):
        cache = InMemoryCacheManager()
        calls = []
        for _ in range(3):
            cache.get_or_compute("key", lambda: calls.append(1) or "value")
        assert len(calls) == 1
        assert cache.hits == 2

    def test_disabled_cache_always_computes(self):
        cache = InMemoryCacheManager(enabled=False)
        calls = []
        for _ in range(2):
            cache.get_or_compute("key", lambda: calls.append(1) or "value")
        assert len(calls) == 2
        assert len(cache) == 0
