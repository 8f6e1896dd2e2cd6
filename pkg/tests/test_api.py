"""
Tests for the JSON API (/api/<experiment>) and the index route.
"""

import pytest


class TestIndex:

    def test_lists_experiments(self, client):
        response = client.get("/")
        assert response.status_code == 200
        body = response.get_json()
        assert body["app"] == "zenolab"
        assert body["experiments"]["decay"] == "/api/decay"
        assert body["presets"] == "/api/presets"


class TestRunExperiment:

    def test_defaults(self, client):
        response = client.post("/api/validate", json={})
        assert response.status_code == 200
        body = response.get_json()
        assert body["success"] is True
        assert body["payload"]["columns"][0] == "condition"
        assert len(body["payload"]["rows"]) == 4

    def test_parameters_and_angles(self, client):
        response = client.post("/api/decay", json={"delta_phi": "4deg", "p": 0.3, "n_max": 10})
        assert response.status_code == 200
        payload = response.get_json()["payload"]
        assert payload["metadata"]["subcommand"] == "decay"
        assert payload["rows"][10][3] == pytest.approx(0.95239, abs=1e-5)

    def test_preset(self, client):
        response = client.post("/api/decay", json={"preset": "decay-zeno", "n_max": 3})
        assert response.status_code == 200
        assert response.get_json()["payload"]["metadata"]["params"]["p"] == 0.8

    def test_montecarlo_with_workers(self, client):
        body = {"model": "iid", "n_max": 5, "trajectories": 50, "seed": 1}
        serial = client.post("/api/montecarlo", json=dict(body, workers=1))
        parallel = client.post("/api/montecarlo", json=dict(body, workers=2))
        assert serial.status_code == 200
        assert serial.get_json()["payload"] == parallel.get_json()["payload"]

    def test_unknown_experiment(self, client):
        assert client.post("/api/plot", json={}).status_code == 404

    def test_invalid_parameter(self, client):
        response = client.post("/api/validate", json={"b": -1})
        assert response.status_code == 400
        assert "b" in response.get_json()["payload"]["errors"]

    def test_body_must_be_an_object(self, client):
        assert client.post("/api/validate", json=[1, 2]).status_code == 400

    @pytest.mark.parametrize("workers", [0, "two", True])
    def test_bad_workers(self, client, workers):
        assert client.post("/api/montecarlo", json={"workers": workers}).status_code == 400

    def test_unknown_preset(self, client):
        assert client.post("/api/decay", json={"preset": "nope"}).status_code == 400

    def test_domain_error(self, client):
        response = client.post("/api/spectra", json={"gamma": [1.0], "points": 5})
        assert response.status_code == 422
        assert response.get_json()["success"] is False

    def test_divergence(self, client):
        response = client.post("/api/rate-curve", json={"gamma": [1.0], "one_minus_theta": [0.0]})
        assert response.status_code == 500

    def test_get_is_not_allowed(self, client):
        assert client.get("/api/decay").status_code == 405


class TestPresets:

    def test_list(self, client):
        response = client.get("/api/presets")
        assert response.status_code == 200
        presets = response.get_json()["payload"]["presets"]
        assert presets["spectral-overlap"]["subcommand"] == "spectra"
