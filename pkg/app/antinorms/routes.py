"""Dual-function routes."""

import numpy as np
from fastapi import APIRouter, Depends, HTTPException, status

from app.antinorms.analysis import describe_dual
from app.antinorms.schemas import DualRequest, DualResponse
from app.core.dependencies import get_scenario_source, resolve_scenario
from app.core.protocols import ScenarioSourceProtocol
from app.exceptions import DimensionMismatchError, NonConvergenceError

router = APIRouter(prefix="/dual", tags=["antinorms"])


@router.post("", response_model=DualResponse)
def evaluate_dual(
    request: DualRequest,
    source: ScenarioSourceProtocol = Depends(get_scenario_source),
) -> DualResponse:
    """Evaluate α∨ at a covector of a registered scenario.

    Args:
        request: Scenario, covector and optional maximizer level
        source: Scenario source (injected via DI)

    Returns:
        DualResponse with the value and, if requested, the maximizer set
    """
    scenario = resolve_scenario(source, request.scenario, request.n)
    try:
        dual, maximizers = describe_dual(scenario.antinorm, np.asarray(request.covector, dtype=float), request.r)
    except DimensionMismatchError as e:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=str(e),
        ) from e
    except NonConvergenceError as e:
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Dual oracle failed: {e!s}",
        ) from e
    return DualResponse(
        scenario=scenario.name,
        covector=request.covector,
        dual=dual,
        maximizers=maximizers,
    )
