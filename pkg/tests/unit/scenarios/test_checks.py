"""Unit tests for structural scenario checks."""

import numpy as np
import pytest

from app.scenarios.checks import check_scenario


@pytest.mark.unit
class TestCheckScenario:
    """Tests for check_scenario."""

    @staticmethod
    def test_minkowski(minkowski):
        report = check_scenario(minkowski, samples=200)
        assert report.ok
        assert report.dual_is_antinorm
        assert report.contact is None
        assert report.messages == ["dual is an antinorm"]

    @staticmethod
    def test_plane_hybrid_witness(plane_hybrid):
        report = check_scenario(plane_hybrid, samples=200)
        assert report.ok
        assert not report.dual_is_antinorm
        assert np.allclose(report.boundary_linearity_witness, [1.0, -1.0], atol=1e-6)
        assert report.messages[0] == "dual is NOT an antinorm; boundary-linearity witness (1,-1)"

    @staticmethod
    def test_heisenberg_quadratic_is_contact(heisenberg_quadratic):
        report = check_scenario(heisenberg_quadratic, samples=200)
        assert report.ok
        assert report.contact is True
        assert "distribution contact" in report.messages

    @staticmethod
    def test_report_serializes(heisenberg_harmonic):
        report = check_scenario(heisenberg_harmonic, samples=200, seed=7)
        data = report.model_dump(mode="json")
        assert data["scenario"] == "heisenberg_harmonic"
        assert data["algebra_violations"] == []
        assert data["axioms"]["samples"] == 200
