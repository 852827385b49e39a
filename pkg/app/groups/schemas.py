"""Pydantic schemas for group models."""

from typing import Annotated, Literal

from pydantic import BaseModel, Field

from app.groups.models import (
    AbelianGroup,
    ExpCoordinatesGroup,
    GroupModel,
    MatrixNilpotentGroup,
    heisenberg_matrix_group,
)
from app.lie.algebra import LieAlgebraSpec


class AbelianGroupConfig(BaseModel):
    kind: Literal["abelian"] = "abelian"

    def build(self, algebra: LieAlgebraSpec) -> GroupModel:
        return AbelianGroup(algebra)


class ExpCoordinatesGroupConfig(BaseModel):
    """Exponential coordinates with the BCH product (nilpotent, step <= 4)."""

    kind: Literal["exp_coordinates"] = "exp_coordinates"

    def build(self, algebra: LieAlgebraSpec) -> GroupModel:
        return ExpCoordinatesGroup(algebra)


class HeisenbergMatrixGroupConfig(BaseModel):
    """3x3 unipotent Heisenberg model with the (a, b, c) chart."""

    kind: Literal["heisenberg_matrix"] = "heisenberg_matrix"

    def build(self, algebra: LieAlgebraSpec) -> GroupModel:
        return heisenberg_matrix_group(algebra)


class MatrixGroupConfig(BaseModel):
    """Unipotent matrix model given by one matrix per basis vector."""

    kind: Literal["matrix"] = "matrix"
    basis_matrices: list[list[list[float]]] = Field(..., min_length=1)

    def build(self, algebra: LieAlgebraSpec) -> GroupModel:
        return MatrixNilpotentGroup(algebra, self.basis_matrices)


GroupModelConfig = Annotated[
    AbelianGroupConfig | ExpCoordinatesGroupConfig | HeisenbergMatrixGroupConfig | MatrixGroupConfig,
    Field(discriminator="kind"),
]
