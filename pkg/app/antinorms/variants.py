"""Concrete antinorms: quadratic, harmonic, hybrid and piecewise linear."""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import linprog

from app.antinorms.base import Antinorm, DualFunctionResult, DualMethod
from app.cones.base import ConvexCone, PointClass, Vector
from app.cones.lorentz import LorentzCone
from app.cones.polyhedral import PolyhedralCone
from app.cones.sector import SectorCone
from app.config import Settings
from app.exceptions import ConstructionError

logger = logging.getLogger(__name__)


class QuadraticAntinorm(Antinorm):
    """α(u) = sqrt(c0 u0^2 - sum c_m u_m^2) on a weighted Lorentz cone."""

    kind = "quadratic"

    def __init__(self, cone: LorentzCone, settings: Settings | None = None) -> None:
        if not isinstance(cone, LorentzCone) or not cone.is_salient():
            raise ConstructionError("a quadratic antinorm needs a salient Lorentz cone")
        super().__init__(cone, settings)
        self.lorentz = cone

    @property
    def weights(self) -> NDArray[np.float64]:
        return self.lorentz.weights

    def _values(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        x = points[:, list(self.lorentz.index)]
        time_part = self.weights[0] * x[:, 0] ** 2
        space_part = (x[:, 1:] ** 2) @ self.weights[1:]
        q = time_part - space_part
        # roundoff band around the light cone
        q = np.where(q <= 8 * np.finfo(float).eps * (time_part + space_part), 0.0, q)
        return np.sqrt(q)

    def dual_quadratic(self, p: Vector) -> float:
        """p0^2/c0 - sum p_m^2/c_m over the index coordinates."""
        x = p[list(self.lorentz.index)]
        return float(x[0] ** 2 / self.weights[0] - np.dot(x[1:] ** 2, 1.0 / self.weights[1:]))

    def closed_form_dual(self, p: Vector, position: PointClass) -> DualFunctionResult:
        if position is PointClass.RELATIVE_BOUNDARY:
            return DualFunctionResult(0.0, None, DualMethod.CLOSED_FORM, attained=False)
        value = float(np.sqrt(max(self.dual_quadratic(p), 0.0)))
        w = self.lorentz.boundary_direction(p)
        return DualFunctionResult(value, w / value, DualMethod.CLOSED_FORM, attained=True)

    def feedback(self, p: ArrayLike) -> Vector:
        """Energy-flow control (-p0/c0, p1/c1, ..., pr/cr)."""
        return self.lorentz.boundary_direction(np.asarray(p, dtype=float))


class _SectorAntinorm(Antinorm):
    """Antinorm written in the coefficients (a, b) of u = a r1 + b r2."""

    def __init__(self, cone: SectorCone, settings: Settings | None = None) -> None:
        if not isinstance(cone, SectorCone) or not cone.is_salient():
            raise ConstructionError(f"a {self.kind} antinorm needs a salient sector cone")
        super().__init__(cone, settings)
        self.sector = cone

    def _coefficients(self, points: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        ab = np.maximum(self.sector.coefficients_batch(points), 0.0)
        return ab[:, 0], ab[:, 1]


class HarmonicAntinorm(_SectorAntinorm):
    """α(a r1 + b r2) = ab / (a + b), zero on the boundary rays and at the apex."""

    kind = "harmonic"

    def _values(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        a, b = self._coefficients(points)
        total = a + b
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(total > 0, a * b / np.where(total > 0, total, 1.0), 0.0)
        return out

    def closed_form_dual(self, p: Vector, position: PointClass) -> DualFunctionResult:
        """(sqrt A + sqrt B)^2 with A = -<p, r1>, B = -<p, r2>.

        The supremum is attained at (1 + sqrt(B/A)) r1 + (1 + sqrt(A/B)) r2
        when both A and B are positive.
        """
        big_a = max(-float(np.dot(p, self.sector.r1)), 0.0)
        big_b = max(-float(np.dot(p, self.sector.r2)), 0.0)
        value = (np.sqrt(big_a) + np.sqrt(big_b)) ** 2
        if position is PointClass.RELATIVE_BOUNDARY or big_a == 0.0 or big_b == 0.0:
            return DualFunctionResult(float(value), None, DualMethod.CLOSED_FORM, attained=False)
        return DualFunctionResult(
            float(value),
            self.maximizer_direction(big_a, big_b),
            DualMethod.CLOSED_FORM,
            attained=True,
        )

    def maximizer_direction(self, big_a: float, big_b: float) -> Vector:
        a = 1.0 + np.sqrt(big_b / big_a)
        b = 1.0 + np.sqrt(big_a / big_b)
        return a * self.sector.r1 + b * self.sector.r2


class HybridAntinorm(_SectorAntinorm):
    """Linear next to the first ray, quadratic next to the second.

    α(a r1 + b r2) = 2b for a >= b and 2 sqrt(ab) for a < b. On the sector
    y >= |x| spanned by (1, 1) and (-1, 1) this reads y - x for x >= 0 and
    sqrt(y^2 - x^2) for x < 0.
    """

    kind = "hybrid"

    def _values(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        a, b = self._coefficients(points)
        return np.minimum(2.0 * b, 2.0 * np.sqrt(a * b))


class PiecewiseLinearAntinorm(Antinorm):
    """α(u) = min_j <l_j, u> for functionals l_j nonnegative on the cone."""

    kind = "piecewise_linear"

    def __init__(
        self,
        cone: ConvexCone,
        functionals: ArrayLike,
        settings: Settings | None = None,
    ) -> None:
        super().__init__(cone, settings)
        rows = np.atleast_2d(np.asarray(functionals, dtype=float))
        if rows.ndim != 2 or rows.shape[1] != cone.dim or rows.shape[0] == 0:
            raise ConstructionError(f"functionals must be a non-empty list of {cone.dim}-vectors")
        dual = cone.dual()
        for j, row in enumerate(rows):
            if dual.classify_point(-row, self.settings.membership_tol) is PointClass.OUTSIDE:
                raise ConstructionError(f"functional {j + 1} is negative somewhere on the cone")
        self.functionals = rows

    def _values(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.min(points @ self.functionals.T, axis=1)

    def _generators(self) -> NDArray[np.float64] | None:
        if isinstance(self.cone, PolyhedralCone):
            return self.cone.generators
        if isinstance(self.cone, SectorCone) and not self.cone.free:
            return np.vstack([self.cone.r1, self.cone.r2])
        return None

    def closed_form_dual(self, p: Vector, position: PointClass) -> DualFunctionResult | None:
        """Exact LP: max <p, G^T λ> subject to <l_j, G^T λ> >= 1, λ >= 0."""
        gens = self._generators()
        if gens is None:
            return None
        objective = -(gens @ p)
        a_ub = -(self.functionals @ gens.T)
        b_ub = -np.ones(self.functionals.shape[0])
        m = gens.shape[0]
        res = linprog(objective, A_ub=a_ub, b_ub=b_ub, bounds=[(0, None)] * m, method="highs")
        if res.status != 0:
            logger.info("Piecewise-linear dual LP ended with status %s; using the numeric oracle", res.status)
            return None
        best = float(-res.fun)
        u = res.x @ gens
        unique = self._optimum_is_unique(gens, objective, a_ub, b_ub, best)
        return DualFunctionResult(-best, u / float(self._values(u[None, :])[0]), DualMethod.CLOSED_FORM, attained=True, unique=unique)

    @staticmethod
    def _optimum_is_unique(
        gens: NDArray[np.float64],
        objective: NDArray[np.float64],
        a_ub: NDArray[np.float64],
        b_ub: NDArray[np.float64],
        best: float,
    ) -> bool:
        """Compare a generic linear probe minimized and maximized over the optimal set."""
        m = gens.shape[0]
        probe = gens @ (np.arange(1, gens.shape[1] + 1, dtype=float) * np.pi % 1.0 + 0.5)
        a_eq = objective[None, :]
        b_eq = np.array([-best])
        span = []
        for sign in (1.0, -1.0):
            res = linprog(sign * probe, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * m, method="highs")
            if res.status == 3:
                return False
            if res.status != 0:
                return True
            span.append(sign * res.fun)
        return abs(span[0] - span[1]) <= 1e-9 * max(1.0, abs(span[0]))
