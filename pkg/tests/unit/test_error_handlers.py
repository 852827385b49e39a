"""Unit tests for error handlers and custom exceptions.

Tests for:
- Custom exception classes
- Exception hierarchy
- Error handling in the HTTP service
"""

import pytest

from app.exceptions import (
    AntinormAxiomError,
    ConeLieError,
    ConfigError,
    ConstructionError,
    DimensionMismatchError,
    EmptyDomainError,
    InvalidAlgebraError,
    NoMaximumError,
    NonConvergenceError,
    NonSalientConeError,
    StepRejectedError,
    UnknownScenarioError,
)


@pytest.mark.unit
class TestCustomExceptions:
    """Tests for custom exception classes."""

    @staticmethod
    def test_base_error_is_exception():
        error = ConeLieError("Test error")
        assert isinstance(error, Exception)
        assert str(error) == "Test error"

    @staticmethod
    def test_dimension_mismatch_attributes():
        error = DimensionMismatchError(expected=3, actual=2, what="covector")
        assert error.expected == 3
        assert error.actual == 2
        assert "covector" in str(error)

    @staticmethod
    def test_construction_errors_share_a_base():
        for cls in (InvalidAlgebraError, NonSalientConeError):
            assert issubclass(cls, ConstructionError)
        assert isinstance(AntinormAxiomError(["(i) bad"]), ConstructionError)

    @staticmethod
    def test_antinorm_axiom_error_lists_violations():
        error = AntinormAxiomError(["(i) α <= 0 at 3 points", "(iii) superadditivity"])
        assert error.violations == ["(i) α <= 0 at 3 points", "(iii) superadditivity"]
        assert "superadditivity" in str(error)

    @staticmethod
    def test_no_maximum_error_carries_covector():
        error = NoMaximumError([0.0, -0.5, 0.0], nu=1, reason="0 < α∨ < 1")
        assert error.covector == (0.0, -0.5, 0.0)
        assert error.nu == 1
        assert "0 < α∨ < 1" in str(error)

    @staticmethod
    def test_non_convergence_carries_best_bound():
        error = NonConvergenceError(0.75, "grid exhausted")
        assert error.best_bound == 0.75
        assert "grid exhausted" in str(error)

    @staticmethod
    def test_empty_domain_error():
        error = EmptyDomainError([1.0, 1.0])
        assert error.covector == (1.0, 1.0)

    @staticmethod
    def test_step_rejected_error():
        error = StepRejectedError(drift=3e-3, limit=1e-4)
        assert error.drift == 3e-3
        assert error.limit == 1e-4

    @staticmethod
    def test_unknown_scenario_lists_names():
        error = UnknownScenarioError("lobachevsky", ["minkowski_1n", "plane_hybrid"])
        assert isinstance(error, KeyError)
        assert "minkowski_1n, plane_hybrid" in str(error)

    @staticmethod
    def test_config_error_formats_paths():
        error = ConfigError([("cone.index", "indices are 1-based"), ("dt", "must be positive")])
        assert error.diagnostics[0] == ("cone.index", "indices are 1-based")
        assert "cone.index: indices are 1-based" in str(error)


@pytest.mark.unit
class TestHttpErrorHandling:
    """Library errors surface as JSON errors, never as 500s."""

    @staticmethod
    def test_unknown_scenario_is_404(test_client):
        response = test_client.get("/scenarios/anti_de_sitter/check")
        assert response.status_code == 404
        assert "minkowski_1n" in response.json()["detail"]

    @staticmethod
    def test_wrong_covector_dimension_is_422(test_client):
        response = test_client.post("/dual", json={"scenario": "heisenberg_harmonic", "covector": [1.0, 2.0]})
        assert response.status_code == 422
