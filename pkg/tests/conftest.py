"""Common test fixtures."""

from collections.abc import Generator

import numpy as np
import pytest
from fastapi.testclient import TestClient

from app.config import Settings
from app.scenarios.registry import Scenario, builtin


@pytest.fixture
def settings() -> Settings:
    """Settings with defaults only (no conelie.toml)."""
    return Settings()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomized property checks."""
    return np.random.default_rng(20240531)


@pytest.fixture
def minkowski() -> Scenario:
    return builtin("minkowski_1n")


@pytest.fixture
def plane_hybrid() -> Scenario:
    return builtin("plane_hybrid")


@pytest.fixture
def heisenberg_harmonic() -> Scenario:
    return builtin("heisenberg_harmonic")


@pytest.fixture
def heisenberg_quadratic() -> Scenario:
    return builtin("heisenberg_quadratic")


@pytest.fixture
def carnot() -> Scenario:
    return builtin("carnot_r2s4")


@pytest.fixture
def test_client() -> Generator[TestClient, None, None]:
    """Create test client for the FastAPI app."""
    from app.main import app

    client = TestClient(app)
    yield client
    app.dependency_overrides.clear()
