"""Pydantic schemas for cone configuration and reports."""

from typing import Annotated, Literal

from pydantic import BaseModel, Field, field_validator

from app.cones.base import ConvexCone
from app.cones.lorentz import LorentzCone
from app.cones.polyhedral import PolyhedralCone
from app.cones.sector import SectorCone
from app.exceptions import DimensionMismatchError


class LorentzConeConfig(BaseModel):
    """Weighted Lorentz cone on the 1-based coordinates (i0; i1, ..., ir)."""

    kind: Literal["lorentz"] = "lorentz"
    index: list[int] = Field(..., min_length=2, description="1-based coordinate indices")
    weights: list[float] | None = Field(None, description="Positive weights c0..cr")

    @field_validator("index")
    @classmethod
    def _positive_indices(cls, value: list[int]) -> list[int]:
        if any(i < 1 for i in value):
            raise ValueError("indices are 1-based")
        if len(set(value)) != len(value):
            raise ValueError("indices must be distinct")
        return value

    @field_validator("weights")
    @classmethod
    def _positive_weights(cls, value: list[float] | None) -> list[float] | None:
        if value is not None and any(w <= 0 for w in value):
            raise ValueError("weights must be positive")
        return value

    def build(self, dim: int) -> LorentzCone:
        if max(self.index) > dim:
            raise DimensionMismatchError(dim, max(self.index), "cone index")
        return LorentzCone(dim, [i - 1 for i in self.index], self.weights)


class PolyhedralConeConfig(BaseModel):
    """Cone generated by a finite list of vectors."""

    kind: Literal["polyhedral"] = "polyhedral"
    generators: list[list[float]] = Field(..., min_length=1)

    def build(self, dim: int) -> PolyhedralCone:
        for g in self.generators:
            if len(g) != dim:
                raise DimensionMismatchError(dim, len(g), "cone generator")
        return PolyhedralCone(self.generators)


class SectorConeConfig(BaseModel):
    """Sector spanned by two rays."""

    kind: Literal["sector"] = "sector"
    rays: tuple[list[float], list[float]]

    def build(self, dim: int) -> SectorCone:
        for r in self.rays:
            if len(r) != dim:
                raise DimensionMismatchError(dim, len(r), "sector ray")
        return SectorCone(self.rays[0], self.rays[1])


ConeConfig = Annotated[
    LorentzConeConfig | PolyhedralConeConfig | SectorConeConfig,
    Field(discriminator="kind"),
]


class ConeSummary(BaseModel):
    """Description of a cone and its dual."""

    kind: str
    description: str
    ambient_dim: int
    span_dim: int
    salient: bool
    dual_description: str

    @classmethod
    def of(cls, cone: ConvexCone) -> "ConeSummary":
        return cls(
            kind=cone.kind,
            description=cone.describe(),
            ambient_dim=cone.dim,
            span_dim=cone.span_dim,
            salient=cone.is_salient(),
            dual_description=cone.dual().describe(),
        )
