"""Pydantic schemas for Lie algebra configuration."""

from typing import Annotated, Literal

from pydantic import BaseModel, Field, model_validator

from app.exceptions import InvalidAlgebraError
from app.lie.algebra import (
    LieAlgebraSpec,
    free_carnot_r2s4,
    heisenberg,
    validate,
)


class BracketAlgebraConfig(BaseModel):
    """Algebra given by 1-based bracket triples ``[i, j, k, value]``."""

    kind: Literal["brackets"] = "brackets"
    dim: int = Field(..., ge=1, le=16, description="Dimension of the algebra")
    brackets: list[tuple[int, int, int, float]] = Field(
        default_factory=list,
        description="[e_i, e_j] has e_k-coefficient value; antisymmetric entries are implied",
    )
    labels: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_indices(self) -> "BracketAlgebraConfig":
        for pos, (i, j, k, _) in enumerate(self.brackets):
            if not all(1 <= x <= self.dim for x in (i, j, k)):
                raise ValueError(f"brackets[{pos}] has an index outside 1..{self.dim}")
        if self.labels and len(self.labels) != self.dim:
            raise ValueError(f"expected {self.dim} labels, got {len(self.labels)}")
        return self

    def build(self) -> LieAlgebraSpec:
        return LieAlgebraSpec.from_brackets(self.dim, self.brackets, self.labels)


class NamedAlgebraConfig(BaseModel):
    """One of the built-in algebras."""

    kind: Literal["named"] = "named"
    name: Literal["abelian", "heisenberg", "carnot_r2s4"]
    dim: int | None = Field(None, ge=1, le=16, description="Only used by 'abelian'")

    def build(self) -> LieAlgebraSpec:
        if self.name == "heisenberg":
            return heisenberg()
        if self.name == "carnot_r2s4":
            return free_carnot_r2s4()
        if self.dim is None:
            raise ValueError("the abelian algebra needs 'dim'")
        return LieAlgebraSpec.abelian(self.dim)


AlgebraConfig = Annotated[
    BracketAlgebraConfig | NamedAlgebraConfig, Field(discriminator="kind")
]


class ViolationReport(BaseModel):
    """Serialized structure-constant violation."""

    kind: str
    indices: list[int]
    residual: float


def build_algebra(config: BracketAlgebraConfig | NamedAlgebraConfig) -> LieAlgebraSpec:
    """Build and validate an algebra from its config.

    Raises:
        InvalidAlgebraError: If antisymmetry or the Jacobi identity fails
    """
    algebra = config.build()
    violations = validate(algebra)
    if violations:
        raise InvalidAlgebraError("; ".join(str(v) for v in violations[:5]))
    return algebra
