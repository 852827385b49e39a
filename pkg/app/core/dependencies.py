"""Dependency Injection configuration for the application.

This module provides FastAPI dependencies for injecting settings and
scenario lookups into route handlers. It centralizes all DI configuration
for easier management and testing.
"""

from __future__ import annotations

from fastapi import Depends, HTTPException, Query, status

from app.config import Settings, get_settings
from app.core.protocols import ScenarioSourceProtocol
from app.exceptions import ConstructionError, UnknownScenarioError
from app.scenarios.registry import Scenario, available, builtin

# =============================================================================
# Settings Dependencies
# =============================================================================


def get_app_settings() -> Settings:
    """Get the cached application settings.

    Returns:
        Settings singleton
    """
    return get_settings()


# =============================================================================
# Scenario Dependencies
# =============================================================================


class BuiltinScenarioSource:
    """Scenario source backed by the built-in registry."""

    def __init__(self, settings: Settings) -> None:
        self.settings = settings

    def names(self) -> list[str]:
        return available()

    def get(self, name: str, n: int | None = None) -> Scenario:
        return builtin(name, n=n, settings=self.settings)


def get_scenario_source(
    settings: Settings = Depends(get_app_settings),
) -> ScenarioSourceProtocol:
    """Get the scenario source used by the routes.

    Args:
        settings: Application settings (injected)

    Returns:
        Source resolving scenario names
    """
    return BuiltinScenarioSource(settings)


def resolve_scenario(
    source: ScenarioSourceProtocol,
    name: str,
    n: int | None = None,
) -> Scenario:
    """Look up a scenario, mapping lookup failures to HTTP errors.

    Args:
        source: Scenario source
        name: Scenario name
        n: Dimension parameter for minkowski_1n

    Returns:
        The scenario

    Raises:
        HTTPException: 404 for unknown names, 422 for bad parameters
    """
    try:
        return source.get(name, n)
    except UnknownScenarioError as e:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=str(e),
        ) from e
    except ConstructionError as e:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=str(e),
        ) from e


def get_path_scenario(
    name: str,
    n: int | None = Query(default=None, ge=1, le=8, description="Dimension parameter for minkowski_1n"),
    source: ScenarioSourceProtocol = Depends(get_scenario_source),
) -> Scenario:
    """Resolve the ``{name}`` path parameter to a scenario.

    Args:
        name: Scenario name from the path
        n: Optional dimension parameter
        source: Scenario source (injected)

    Returns:
        The scenario
    """
    return resolve_scenario(source, name, n)
