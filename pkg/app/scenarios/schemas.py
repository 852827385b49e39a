"""Pydantic schemas for scenario configuration and reports."""

from pydantic import BaseModel, Field

from app.antinorms.schemas import AntinormConfig, AxiomReport
from app.cones.schemas import ConeConfig, ConeSummary
from app.groups.schemas import GroupModelConfig
from app.lie.schemas import AlgebraConfig, ViolationReport


class ScenarioConfig(BaseModel):
    """Custom problem instance: algebra, cone, antinorm and group model.

    When ``group`` is omitted the abelian model is used for abelian algebras
    and exponential coordinates otherwise.
    """

    name: str = "custom"
    description: str = ""
    algebra: AlgebraConfig
    cone: ConeConfig
    antinorm: AntinormConfig
    group: GroupModelConfig | None = None
    default_covector: list[float] | None = None


class ExpectationRecord(BaseModel):
    claim: str
    description: str


class ScenarioSummary(BaseModel):
    """What ``scenarios`` lists for each entry."""

    name: str
    description: str
    dim: int
    algebra_labels: list[str]
    nilpotency_step: int | None
    cone: ConeSummary
    antinorm: str
    group_model: str
    chart_labels: list[str]
    lorentzian: bool
    default_covector: list[float] | None = None
    expectations: list[ExpectationRecord] = Field(default_factory=list)


class CheckReport(BaseModel):
    """Structural checks of one scenario."""

    scenario: str
    algebra_violations: list[ViolationReport] = Field(default_factory=list)
    salient: bool
    axioms: AxiomReport
    dual_is_antinorm: bool
    boundary_linearity_witness: list[float] | None = None
    contact: bool | None = Field(None, description="None unless the algebra is 3-dimensional with a 2-plane span C")
    messages: list[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        """Hard invariants: valid algebra, salient cone, antinorm axioms."""
        return not self.algebra_violations and self.salient and self.axioms.axioms_hold
