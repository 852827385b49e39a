"""Antinorm interface, the -inf sentinel and dual-function results."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.cones.base import ConvexCone, PointClass, Vector
from app.config import Settings, get_settings

logger = logging.getLogger(__name__)


class NegInf(Enum):
    """Value of an antinorm off its cone, and of the dual function off the dual cone."""

    NEG_INF = "-inf"

    def __str__(self) -> str:
        return self.value


NEG_INF = NegInf.NEG_INF

AntinormValue = float | NegInf


def is_finite(value: AntinormValue) -> bool:
    return not isinstance(value, NegInf)


def format_value(value: AntinormValue) -> str:
    """17-significant-digit text form used in exports."""
    return str(value) if isinstance(value, NegInf) else format(value, ".17g")


def parse_value(text: str) -> AntinormValue:
    return NEG_INF if text.strip() == NEG_INF.value else float(text)


class DualMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class DualFunctionResult:
    """Value of α∨ at a covector p.

    Attributes:
        value: α∨(p), or NEG_INF when p is not in the dual cone
        maximizer: A point of S_1 realizing the supremum, when attained
        method: How the value was obtained
        attained: Whether sup over S_1 of <p, v> is a maximum
        unique: Whether the maximizer set p∨_1 is a single point
    """

    value: AntinormValue
    maximizer: Vector | None
    method: DualMethod
    attained: bool = False
    unique: bool = True

    @property
    def finite(self) -> bool:
        return is_finite(self.value)

    def as_float(self) -> float:
        return float("-inf") if isinstance(self.value, NegInf) else float(self.value)


class Antinorm(ABC):
    """Antinorm associated with a closed convex salient cone.

    Concrete variants implement ``_values`` on points known to lie in the cone
    and optionally a closed-form dual function.
    """

    kind: str = "antinorm"

    def __init__(self, cone: ConvexCone, settings: Settings | None = None) -> None:
        self._cone = cone
        self._settings = settings or get_settings()

    @property
    def cone(self) -> ConvexCone:
        return self._cone

    @property
    def dim(self) -> int:
        return self._cone.dim

    @property
    def settings(self) -> Settings:
        return self._settings

    @abstractmethod
    def _values(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """Formula values at rows of ``points`` (all in C)."""

    def closed_form_dual(self, p: Vector, position: PointClass) -> DualFunctionResult | None:
        """Closed-form α∨(p) for p in the dual cone, or None to use the numeric oracle."""
        return None

    def values(self, points: ArrayLike) -> NDArray[np.float64]:
        """Vectorized evaluation for points already known to lie in the cone."""
        return self._values(np.atleast_2d(np.asarray(points, dtype=float)))

    def eval(self, u: ArrayLike) -> AntinormValue:
        """α(u), or NEG_INF when u is outside the cone."""
        uu = self._cone.check_vector(u)
        if self._cone.classify_point(uu, self._settings.membership_tol) is PointClass.OUTSIDE:
            return NEG_INF
        return float(self._values(uu[None, :])[0])

    def dual_value(self, p: ArrayLike) -> DualFunctionResult:
        """α∨(p) = -sup over S_1 of <p, v>.

        Raises:
            DimensionMismatchError: If p has the wrong length
            NonConvergenceError: If the numeric oracle cannot certify its optimum
        """
        from app.antinorms.oracle import numeric_dual

        pp = self._cone.check_vector(p, "covector")
        position = self._cone.dual().classify_point(pp, self._settings.membership_tol)
        if position is PointClass.OUTSIDE:
            return DualFunctionResult(NEG_INF, None, DualMethod.CLOSED_FORM)
        if self._cone.annihilates(pp, self._settings.annihilator_tol):
            center = self._cone.interior_point()
            return DualFunctionResult(
                0.0,
                center / float(self._values(center[None, :])[0]),
                DualMethod.CLOSED_FORM,
                attained=True,
                unique=False,
            )
        closed = self.closed_form_dual(pp, position)
        if closed is not None:
            return closed
        return numeric_dual(self, pp)

    def describe(self) -> str:
        return f"{self.kind} antinorm on the {self._cone.describe()}"

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"
