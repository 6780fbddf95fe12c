import pytest
from fastapi.testclient import TestClient

from qrelativity.api import app
from qrelativity.constants import SCENARIO_KINDS
from qrelativity.schemas import VerifyResponse

pytestmark = pytest.mark.usefixtures("clean_settings")


@pytest.fixture
def client():
    return TestClient(app)


def test_root_lists_scenario_kinds(client):
    body = client.get("/").json()
    assert body["name"] == "qrelativity"
    assert body["scenario_kinds"] == list(SCENARIO_KINDS)


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "operational"
    assert set(body["dependencies"]) == {"numpy_fft", "numpy_linalg", "scipy"}


def test_transform_table_endpoint(client):
    response = client.post("/transforms/table", json={"mass_pairs": [[1.0, 4.0]], "energies": [0.0, 1.0], "h": 1.0})
    assert response.status_code == 200
    rows = response.json()["rows"]
    assert rows[0]["dilation"] == 0.5
    assert rows[1]["delta"] is None


def test_transform_table_validation(client):
    assert client.post("/transforms/table", json={"mass_pairs": []}).status_code == 422


def test_run_scenario(client):
    response = client.post("/scenarios/run", json={"kind": "wigner_chain", "seed": 2, "params": {"c1": 0.6, "c2": 0.8}})
    assert response.status_code == 200
    body = response.json()
    assert body["metric"] == "branch"
    assert body["value"] in (0, 1)
    assert body["payload"]["intransitive_pairs"] == [["A", "E"], ["E", "A"]]


def test_run_scenario_precondition_is_bad_request(client):
    response = client.post("/scenarios/run", json={"kind": "wigner_chain", "params": {"c1": 0.6, "c2": 0.6}})
    assert response.status_code == 400


def test_run_scenario_bad_params_is_unprocessable(client):
    response = client.post("/scenarios/run", json={"kind": "chain_fit", "params": {}})
    assert response.status_code == 422
    assert response.json()["detail"].startswith("params.masses")


def test_builtin_endpoints(client):
    names = client.get("/scenarios/builtin").json()["scenarios"]
    assert "relation_check" in names
    assert client.post("/scenarios/builtin/relation_check").json()["kind"] == "relation_check"
    assert client.post("/scenarios/builtin/nope").status_code == 404


def test_verify_endpoint(client):
    response = VerifyResponse.model_validate(client.get("/verify", params={"only": "transforms"}).json())
    assert response.passed
    assert response.failed == []
    assert all(r.name.startswith("transforms.") for r in response.results)
    assert client.get("/verify", params={"only": "gravity"}).status_code == 422


def test_token_is_enforced_when_configured(client, monkeypatch):
    monkeypatch.setenv("QREL_API_TOKEN", "secret")
    assert client.post("/transforms/table", json={"mass_pairs": [[1.0, 1.0]]}).status_code == 401
    ok = client.post("/transforms/table", json={"mass_pairs": [[1.0, 1.0]]}, headers={"X-API-Token": "secret"})
    assert ok.status_code == 200
    assert client.get("/health").status_code == 200
