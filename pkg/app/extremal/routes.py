"""Extremal integration routes."""

import logging

from fastapi import APIRouter, Depends, HTTPException, status

from app.core.dependencies import get_scenario_source, resolve_scenario
from app.core.protocols import ScenarioSourceProtocol
from app.exceptions import ConfigError, DimensionMismatchError, NoMaximumError
from app.extremal.schemas import RunRequest, RunResponse, TrajectoryRecord, TrajectorySummary

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/run", tags=["extremals"])


@router.post("", response_model=RunResponse)
def run_extremal(
    request: RunRequest,
    source: ScenarioSourceProtocol = Depends(get_scenario_source),
) -> RunResponse:
    """Integrate an extremal of a registered scenario.

    Args:
        request: Scenario, initial covector, horizon and control law
        source: Scenario source (injected via DI)

    Returns:
        RunResponse with the summary and, if requested, every sample

    Raises:
        HTTPException: 422 for invalid input, 409 when no extremal passes through h0
    """
    scenario = resolve_scenario(source, request.scenario, request.n)
    try:
        traj = scenario.integrate(
            request.initial_covector,
            request.control.to_config(),
            request.t1,
            request.dt,
        )
    except (DimensionMismatchError, ConfigError) as e:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=str(e),
        ) from e
    except NoMaximumError as e:
        raise HTTPException(
            status_code=status.HTTP_409_CONFLICT,
            detail=str(e),
        ) from e

    logger.info("Run %s: %d samples, arcs %s", scenario.name, len(traj), [a.value for a in traj.arcs()])
    return RunResponse(
        summary=TrajectorySummary.of(traj, scenario.name),
        trajectory=TrajectoryRecord.of(traj, scenario.name) if request.include_samples else None,
    )
