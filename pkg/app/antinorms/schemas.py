"""Pydantic schemas for antinorm configuration, dual results and reports."""

from typing import Annotated, Literal

from pydantic import BaseModel, Field

from app.antinorms.base import Antinorm, DualFunctionResult, NegInf
from app.antinorms.oracle import MaximizerSet
from app.antinorms.variants import (
    HarmonicAntinorm,
    HybridAntinorm,
    PiecewiseLinearAntinorm,
    QuadraticAntinorm,
)
from app.cones.base import ConvexCone
from app.config import Settings


class QuadraticAntinormConfig(BaseModel):
    """sqrt of the Lorentz quadratic form; weights are taken from the cone."""

    kind: Literal["quadratic"] = "quadratic"

    def build(self, cone: ConvexCone, settings: Settings | None = None) -> Antinorm:
        return QuadraticAntinorm(cone, settings)  # type: ignore[arg-type]


class HarmonicAntinormConfig(BaseModel):
    """ab / (a + b) in sector coefficients."""

    kind: Literal["harmonic"] = "harmonic"

    def build(self, cone: ConvexCone, settings: Settings | None = None) -> Antinorm:
        return HarmonicAntinorm(cone, settings)  # type: ignore[arg-type]


class HybridAntinormConfig(BaseModel):
    """Linear near the first sector ray, quadratic near the second."""

    kind: Literal["hybrid"] = "hybrid"

    def build(self, cone: ConvexCone, settings: Settings | None = None) -> Antinorm:
        return HybridAntinorm(cone, settings)  # type: ignore[arg-type]


class PiecewiseLinearAntinormConfig(BaseModel):
    """Minimum of linear functionals nonnegative on the cone."""

    kind: Literal["piecewise_linear"] = "piecewise_linear"
    functionals: list[list[float]] = Field(..., min_length=1)

    def build(self, cone: ConvexCone, settings: Settings | None = None) -> Antinorm:
        return PiecewiseLinearAntinorm(cone, self.functionals, settings)


AntinormConfig = Annotated[
    QuadraticAntinormConfig
    | HarmonicAntinormConfig
    | HybridAntinormConfig
    | PiecewiseLinearAntinormConfig,
    Field(discriminator="kind"),
]


class DualResultRecord(BaseModel):
    """Exported form of a dual-function evaluation."""

    value: float | Literal["-inf"]
    maximizer: list[float] | None = None
    method: str
    attained: bool
    unique: bool

    @classmethod
    def of(cls, result: DualFunctionResult) -> "DualResultRecord":
        value = result.value
        return cls(
            value="-inf" if isinstance(value, NegInf) else float(value),
            maximizer=None if result.maximizer is None else [float(x) for x in result.maximizer],
            method=result.method.value,
            attained=result.attained,
            unique=result.unique,
        )


class MaximizerSetRecord(BaseModel):
    """Exported form of a maximizer set."""

    r: float
    shape: str
    unique: bool
    unbounded: bool
    convex: bool
    points: list[list[float]]

    @classmethod
    def of(cls, mset: MaximizerSet) -> "MaximizerSetRecord":
        return cls(
            r=mset.r,
            shape=mset.shape,
            unique=mset.unique,
            unbounded=mset.unbounded,
            convex=mset.convex,
            points=mset.points.tolist(),
        )


class AxiomReport(BaseModel):
    """Randomized verification of the antinorm axioms and of the dual boundary criterion."""

    samples: int
    positivity_ok: bool = Field(description="α > 0 on ri C, α = 0 on rb C, -inf off C")
    homogeneity_ok: bool
    superadditivity_ok: bool
    max_homogeneity_error: float
    min_superadditivity_gap: float
    violations: list[str] = Field(default_factory=list)
    dual_boundary_samples: int
    max_dual_on_boundary: float
    dual_is_antinorm: bool

    @property
    def axioms_hold(self) -> bool:
        return self.positivity_ok and self.homogeneity_ok and self.superadditivity_ok


class DualRequest(BaseModel):
    """Request to evaluate α∨ at a covector of a registered scenario."""

    scenario: str
    covector: list[float]
    n: int | None = Field(None, ge=1, le=8, description="Dimension parameter for minkowski_1n")
    r: float | None = Field(None, ge=0, description="Also describe the maximizer set at this level")


class DualResponse(BaseModel):
    scenario: str
    covector: list[float]
    dual: DualResultRecord
    maximizers: MaximizerSetRecord | None = None
