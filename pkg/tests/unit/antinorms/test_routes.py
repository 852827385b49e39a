"""Unit tests for the dual-function route."""

import pytest
from fastapi import status


@pytest.mark.unit
class TestEvaluateDual:
    """Tests for POST /dual."""

    @staticmethod
    def test_closed_form_value(test_client):
        response = test_client.post("/dual", json={"scenario": "minkowski_1n", "covector": [-2.0, 1.0, 0.0], "r": 2.0})
        assert response.status_code == status.HTTP_200_OK
        data = response.json()
        assert data["dual"]["value"] == pytest.approx(3.0**0.5)
        assert data["dual"]["method"] == "closed_form"
        assert data["maximizers"]["shape"] == "point"
        assert data["maximizers"]["points"][0] == pytest.approx([4.0 / 3.0**0.5, 2.0 / 3.0**0.5, 0.0])

    @staticmethod
    def test_harmonic_value(test_client):
        response = test_client.post("/dual", json={"scenario": "heisenberg_harmonic", "covector": [-1.0, -4.0, 0.0]})
        assert response.status_code == status.HTTP_200_OK
        data = response.json()
        assert data["dual"]["value"] == pytest.approx(9.0)
        assert data["maximizers"] is None

    @staticmethod
    def test_outside_dual_cone(test_client):
        response = test_client.post("/dual", json={"scenario": "heisenberg_harmonic", "covector": [1.0, 0.0, 0.0]})
        assert response.status_code == status.HTTP_200_OK
        assert response.json()["dual"]["value"] == "-inf"

    @staticmethod
    def test_wrong_length(test_client):
        response = test_client.post("/dual", json={"scenario": "minkowski_1n", "covector": [1.0, 0.0]})
        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY

    @staticmethod
    def test_unknown_scenario(test_client):
        response = test_client.post("/dual", json={"scenario": "de_sitter", "covector": [1.0]})
        assert response.status_code == status.HTTP_404_NOT_FOUND
