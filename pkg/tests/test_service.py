import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from starlette.testclient import TestClient

from spinqd import __version__
from spinqd.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def qnd_scenario():
    return {
        "state": {"kind": "coherent", "j": 0.5, "alpha": 1.0, "beta": 0.3},
        "channel": {"kind": "qnd", "gamma0": 0.1, "omega_c": 100.0, "temperature": 1.0},
        "angles": {"theta": [0.7], "phi": [0.4]},
        "times": [0.0, 1.0],
    }


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "version": __version__}


def test_figures_listing(client):
    resp = client.get("/figures")
    assert resp.status_code == 200
    listing = resp.json()
    assert len(listing) == 30
    assert {"id", "description", "mode"} <= set(listing[0])


def test_eval_endpoint(client):
    resp = client.post("/eval", json={"scenario": qnd_scenario()})
    assert resp.status_code == 200
    body = resp.json()
    assert body["provenance"] == "exact"
    assert body["columns"] == ["t", "theta1", "phi1", "W", "P", "Q", "F"]
    assert body["csv"].startswith("# format_version: 1\n")
    assert f"# scenario: {body['scenario']}" in body["csv"]
    # deterministic across calls
    again = client.post("/eval", json={"scenario": qnd_scenario()})
    assert again.json()["csv"] == body["csv"]


def test_volume_endpoint(client):
    doc = qnd_scenario()
    doc["quadrature"] = {"n_theta": 32, "n_phi": 32}
    resp = client.post("/volume", json={"scenario": doc})
    assert resp.status_code == 200
    assert resp.json()["columns"] == ["t", "delta"]


def test_negativity_endpoint(client):
    doc = qnd_scenario()
    doc["quadrature"] = {"n_theta": 16, "n_phi": 16}
    resp = client.post("/negativity", json={"scenario": doc, "kind": "W", "t": 1.0})
    assert resp.status_code == 200
    report = resp.json()
    assert report["t"] == 1.0
    assert "delta" in report and "min" in report and "negative_fraction" in report


def test_config_errors_are_422(client):
    bad = qnd_scenario()
    bad["state"]["kind"] = "bogus"
    resp = client.post("/eval", json={"scenario": bad})
    assert resp.status_code == 422
    assert resp.json()["detail"].startswith("config:")

    resp = client.post("/negativity", json={"scenario": qnd_scenario(), "kind": "X"})
    assert resp.status_code == 422

    resp = client.post("/figure/fig99", json={})
    assert resp.status_code == 422


def test_strict_two_qubit_dephasing_is_422(client):
    doc = {
        "state": {"kind": "coherent", "j": 0.5, "alpha": 1.0, "n": 2},
        "channel": {"kind": "qnd-2qubit", "gamma0": 0.01, "omega_c": 100.0},
        "angles": {"theta": [0.5, 0.6], "phi": [0.1, 0.2]},
        "times": [0.0, 0.5],
    }
    resp = client.post("/eval", json={"scenario": doc, "strict": True})
    assert resp.status_code == 422
    # without strict the run succeeds and is flagged as an approximation
    resp = client.post("/eval", json={"scenario": doc})
    assert resp.status_code == 200
    assert resp.json()["provenance"] == "approximation"


def test_numerical_failures_are_500(client):
    doc = {
        "state": {"kind": "mixed", "dims": [5]},
        "channel": {"kind": "dicke", "n_atoms": 4, "nbar": 25.0, "g": 0.1, "gamma": 0.01},
        "angles": {"theta": [0.1], "phi": [0.2]},
        "times": [100.0],
    }
    resp = client.post("/eval", json={"scenario": doc})
    assert resp.status_code == 500
    assert resp.json()["detail"].startswith("numerical:")


def test_figure_endpoint(client):
    resp = client.post("/figure/fig10a", json={})
    assert resp.status_code == 200
    body = resp.json()
    assert body["figure_id"] == "fig10a"
    assert body["provenance"] == "exact"
    assert set(body["files"]) == {"fig10a.csv", "fig10a.gp"}
    assert body["manifest"]["id"] == "fig10a"


def test_figure_endpoint_strict_refusal(client):
    resp = client.post("/figure/fig5a", json={"strict": True})
    assert resp.status_code == 422
    assert resp.json()["detail"].startswith("config:")
