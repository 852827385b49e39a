"""Scenario routes."""

from fastapi import APIRouter, Depends, Query

from app.core.dependencies import get_path_scenario, get_scenario_source
from app.core.protocols import ScenarioSourceProtocol
from app.scenarios.checks import check_scenario
from app.scenarios.registry import Scenario
from app.scenarios.schemas import CheckReport, ScenarioSummary

router = APIRouter(prefix="/scenarios", tags=["scenarios"])


@router.get("", response_model=list[ScenarioSummary])
def list_scenarios(
    source: ScenarioSourceProtocol = Depends(get_scenario_source),
) -> list[ScenarioSummary]:
    """List the registered scenarios.

    Args:
        source: Scenario source (injected via DI)

    Returns:
        One summary per scenario, in registry order
    """
    return [source.get(name).summary() for name in source.names()]


@router.get("/{name}", response_model=ScenarioSummary)
def get_scenario(scenario: Scenario = Depends(get_path_scenario)) -> ScenarioSummary:
    """Describe one scenario."""
    return scenario.summary()


@router.get("/{name}/check")
def check(
    scenario: Scenario = Depends(get_path_scenario),
    samples: int = Query(default=500, ge=100, le=5000, description="Random samples for the axiom check"),
) -> dict:
    """Run the structural checks on a scenario.

    Args:
        scenario: Scenario resolved from the path (injected)
        samples: Sample count for the antinorm axiom check

    Returns:
        The check report plus the overall verdict
    """
    report: CheckReport = check_scenario(scenario, samples=samples)
    return {"ok": report.ok, "report": report.model_dump()}
