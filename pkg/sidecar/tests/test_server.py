import pytest
from fastapi.testclient import TestClient

from nlikit_sidecar.config import ServingConfig
from nlikit_sidecar.modeling import LabelOrderError
from nlikit_sidecar.server import create_app

from conftest import build_tiny_checkpoint


@pytest.fixture(scope="module")
def client(tiny_checkpoint):
    app = create_app(ServingConfig(model=str(tiny_checkpoint), max_batch=8, max_seq_len=64))
    return TestClient(app)


class TestEndpoints:
    def test_health(self, client):
        response = client.get("/v1/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "ok"
        assert body["model"]

    def test_two_pairs_two_normalized_triples(self, client):
        response = client.post(
            "/v1/classify_batch",
            json={"pairs": [
                {"premise": "The cat sees the dog.", "hypothesis": "The cat sees the dog."},
                {"premise": "The dog sees the cat.", "hypothesis": "The cat sees the dog."},
            ]},
        )
        assert response.status_code == 200
        probs = response.json()["probs"]
        assert len(probs) == 2
        for row in probs:
            assert len(row) == 3
            assert all(0.0 <= p <= 1.0 for p in row)
            assert abs(sum(row) - 1.0) <= 1e-6

    def test_empty_batch(self, client):
        response = client.post("/v1/classify_batch", json={"pairs": []})
        assert response.status_code == 200
        assert response.json()["probs"] == []

    def test_oversized_batch_413(self, client):
        pairs = [{"premise": f"P {i}.", "hypothesis": "H."} for i in range(9)]
        response = client.post("/v1/classify_batch", json={"pairs": pairs})
        assert response.status_code == 413

    def test_malformed_body_is_non_200(self, client):
        response = client.post("/v1/classify_batch", json={"pairs": [{"premise": "only one side"}]})
        assert response.status_code != 200

    def test_single_equals_batched(self, client):
        # fixed-length padding + serialized single-thread math: bit-identical
        pairs = [
            {"premise": "The farmer watches the nurse.", "hypothesis": "The nurse watches the farmer."},
            {"premise": "The cat sees the dog.", "hypothesis": "The dog does not see the cat."},
            {"premise": "The dog chases the cat.", "hypothesis": "The dog chases the cat."},
        ]
        batched = client.post("/v1/classify_batch", json={"pairs": pairs}).json()["probs"]
        singles = [
            client.post("/v1/classify_batch", json={"pairs": [pair]}).json()["probs"][0]
            for pair in pairs
        ]
        assert batched == singles


def test_misordered_checkpoint_refuses_to_start(tmp_path, training_file):
    bad = build_tiny_checkpoint(
        tmp_path / "bad",
        training_file,
        id2label={0: "neutrality", 1: "entailment", 2: "contradiction"},
    )
    with pytest.raises(LabelOrderError):
        create_app(ServingConfig(model=str(bad)))


def test_missing_model_rejected():
    with pytest.raises(ValueError, match="model"):
        create_app(ServingConfig())
