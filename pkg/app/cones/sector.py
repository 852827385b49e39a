"""Two-dimensional sectors embedded in R^n."""

from __future__ import annotations

from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import null_space, orth

from app.cones.base import DEFAULT_TOL, ConvexCone, Face, PointClass, Vector, unit
from app.exceptions import ConstructionError


class SectorCone(ConvexCone):
    """C = {a r1 + b r2 : a, b >= 0} for independent rays r1, r2.

    With ``free`` set the cone additionally contains the orthogonal
    complement of span{r1, r2}; this is the form taken by the dual of a
    sector embedded in a higher-dimensional space.

    The rays are kept as given (not normalized): antinorms on sectors are
    expressed in the coefficients (a, b) with respect to them.
    """

    kind = "sector"

    def __init__(self, r1: ArrayLike, r2: ArrayLike, free: bool = False) -> None:
        v1 = np.asarray(r1, dtype=float)
        v2 = np.asarray(r2, dtype=float)
        if v1.ndim != 1 or v1.shape != v2.shape:
            raise ConstructionError("sector rays must be vectors of equal length")
        super().__init__(v1.shape[0])
        if self.dim < 2 or np.linalg.matrix_rank(np.vstack([v1, v2]), tol=1e-12) < 2:
            raise ConstructionError("sector rays must be linearly independent")
        self.r1 = v1
        self.r2 = v2
        self.free = free

    @cached_property
    def _plane(self) -> NDArray[np.float64]:
        """Orthonormal basis of span{r1, r2} as columns."""
        return orth(np.column_stack([self.r1, self.r2]))

    @cached_property
    def _complement(self) -> NDArray[np.float64]:
        return null_space(np.vstack([self.r1, self.r2]))

    @cached_property
    def _dual_pair(self) -> tuple[Vector, Vector]:
        return self.dual_rays()

    def coefficients(self, u: ArrayLike) -> tuple[float, float]:
        """Coefficients (a, b) of the in-plane part of ``u`` in the basis r1, r2."""
        a, b = self.coefficients_batch(np.asarray(u, dtype=float)[None, :])[0]
        return float(a), float(b)

    def coefficients_batch(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """Row-wise (a, b) coefficients, shape (m, 2).

        a = <d2, u> / <d2, r1> and b = <d1, u> / <d1, r2>, so a point on a
        boundary ray gets an exact zero for the other coefficient. Values
        within roundoff of zero are snapped to it.
        """
        d1, d2 = self._dual_pair
        ab = np.column_stack([(points @ d2) / np.dot(d2, self.r1), (points @ d1) / np.dot(d1, self.r2)])
        ray_norms = np.array([np.linalg.norm(self.r1), np.linalg.norm(self.r2)])
        noise = 16 * np.finfo(float).eps * np.linalg.norm(points, axis=1)[:, None] / ray_norms
        return np.where(np.abs(ab) <= noise, 0.0, ab)

    def classify_point(self, u: ArrayLike, tol: float = DEFAULT_TOL) -> PointClass:
        uu = self.check_vector(u)
        norm = float(np.linalg.norm(uu))
        if norm == 0.0:
            return PointClass.RELATIVE_BOUNDARY
        in_plane = self._plane @ (self._plane.T @ uu)
        if not self.free and np.linalg.norm(uu - in_plane) > tol * norm:
            return PointClass.OUTSIDE
        plane_norm = float(np.linalg.norm(in_plane))
        if plane_norm <= tol * norm:
            return PointClass.RELATIVE_BOUNDARY
        a, b = self.coefficients(in_plane)
        a *= float(np.linalg.norm(self.r1)) / plane_norm
        b *= float(np.linalg.norm(self.r2)) / plane_norm
        if min(a, b) < -tol:
            return PointClass.OUTSIDE
        if min(a, b) <= tol:
            return PointClass.RELATIVE_BOUNDARY
        return PointClass.RELATIVE_INTERIOR

    def dual_rays(self) -> tuple[Vector, Vector]:
        """Unit rays d1 ⟂ r1 and d2 ⟂ r2 in the plane with <d1, r2> < 0, <d2, r1> < 0."""

        def perpendicular(r: Vector, other: Vector) -> Vector:
            d = other - np.dot(other, r) / np.dot(r, r) * r
            return -unit(d)

        return perpendicular(self.r1, self.r2), perpendicular(self.r2, self.r1)

    def dual(self) -> SectorCone:
        d1, d2 = self.dual_rays()
        return SectorCone(d1, d2, free=not self.free)

    def is_salient(self) -> bool:
        return not self.free or self.dim == 2

    def span_basis(self) -> list[Vector]:
        if self.free:
            return list(np.eye(self.dim))
        return list(self._plane.T)

    def lineality_basis(self) -> list[Vector]:
        if not self.free:
            return []
        return list(self._complement.T)

    def interior_point(self) -> Vector:
        return unit(unit(self.r1) + unit(self.r2))

    def extreme_rays(self) -> list[Vector]:
        if self.free and self.dim > 2:
            return super().extreme_rays()
        return [unit(self.r1), unit(self.r2)]

    def exposed_face(self, p: ArrayLike, tol: float = 1e-8) -> Face:
        if not self.is_salient():
            return super().exposed_face(p, tol)
        pp = self.check_vector(p, "covector")
        scale = max(1.0, float(np.linalg.norm(pp)))
        rays = tuple(
            unit(r) for r in (self.r1, self.r2) if abs(np.dot(pp, unit(r))) <= tol * scale
        )
        if len(rays) == 2:
            return Face(rays=rays, whole_cone=True)
        return Face(rays=rays)

    def _lineality_noise(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        if not self.free or self._complement.shape[1] == 0:
            return np.zeros((count, self.dim))
        return rng.standard_normal((count, self._complement.shape[1])) @ self._complement.T

    def sample_interior(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        ab = rng.uniform(0.05, 1.0, size=(count, 2))
        rows = ab[:, :1] * unit(self.r1) + ab[:, 1:] * unit(self.r2)
        return rows + self._lineality_noise(rng, count)

    def sample_boundary(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        scale = rng.uniform(0.1, 2.0, size=(count, 1))
        pick = rng.integers(0, 2, size=count)
        rays = np.where(pick[:, None] == 0, unit(self.r1), unit(self.r2))
        return scale * rays + self._lineality_noise(rng, count)

    def nearest_boundary(self, p: ArrayLike) -> Vector:
        """Project the in-plane part onto the nearer boundary ray."""
        pp = self.check_vector(p)
        in_plane = self._plane @ (self._plane.T @ pp)
        rest = pp - in_plane if self.free else np.zeros(self.dim)
        best = rest
        best_dist = np.inf
        for r in (unit(self.r1), unit(self.r2)):
            cand = max(float(np.dot(in_plane, r)), 0.0) * r + rest
            dist = float(np.linalg.norm(cand - pp))
            if dist < best_dist:
                best, best_dist = cand, dist
        return best

    def describe(self) -> str:
        return (
            f"sector cone spanned by {self.r1.tolist()} and {self.r2.tolist()}"
            + (" plus its orthogonal complement" if self.free else "")
        )
