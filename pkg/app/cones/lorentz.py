"""Weighted Lorentz (quadratic) cones."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.cones.base import DEFAULT_TOL, ConvexCone, Face, PointClass, Vector, unit
from app.exceptions import ConstructionError


class LorentzCone(ConvexCone):
    """C = {u : c0 u_{i0}^2 >= sum c_m u_{im}^2, sign * u_{i0} >= 0}.

    Coordinates outside the index list are zero on the cone, or arbitrary
    when ``free`` is set. Free cones appear as duals of cones embedded in a
    coordinate subspace; their lineality space is the set of free coordinates.

    Args:
        ambient_dim: Dimension n of the ambient space
        index: 0-based coordinate indices (i0, i1, ..., ir), r >= 1
        weights: Positive weights (c0, c1, ..., cr); defaults to all ones
        sign: +1 for the future cone u_{i0} >= 0, -1 for the past cone
        free: Whether coordinates outside the index list are unconstrained
    """

    kind = "lorentz"

    def __init__(
        self,
        ambient_dim: int,
        index: Sequence[int],
        weights: Sequence[float] | None = None,
        sign: int = 1,
        free: bool = False,
    ) -> None:
        super().__init__(ambient_dim)
        idx = tuple(int(i) for i in index)
        if len(idx) < 2:
            raise ConstructionError("a Lorentz cone needs a time index and at least one space index")
        if len(set(idx)) != len(idx) or not all(0 <= i < ambient_dim for i in idx):
            raise ConstructionError(f"invalid Lorentz index list {idx} for dimension {ambient_dim}")
        w = np.ones(len(idx)) if weights is None else np.asarray(weights, dtype=float)
        if w.shape != (len(idx),) or np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ConstructionError("Lorentz weights must be positive, one per index")
        if sign not in (1, -1):
            raise ConstructionError("sign must be +1 or -1")
        self.index = idx
        self.weights = w
        self.sign = sign
        self.free = free
        self._outside = tuple(i for i in range(ambient_dim) if i not in idx)

    @property
    def time_index(self) -> int:
        return self.index[0]

    @property
    def space_index(self) -> tuple[int, ...]:
        return self.index[1:]

    def quadratic_form(self, u: ArrayLike) -> float:
        """q(u) = c0 u0^2 - sum c_m u_m^2 over the index coordinates."""
        x = np.asarray(u, dtype=float)[list(self.index)]
        return float(self.weights[0] * x[0] ** 2 - np.dot(self.weights[1:], x[1:] ** 2))

    def classify_point(self, u: ArrayLike, tol: float = DEFAULT_TOL) -> PointClass:
        uu = self.check_vector(u)
        norm = float(np.linalg.norm(uu))
        if norm == 0.0:
            return PointClass.RELATIVE_BOUNDARY
        if not self.free and self._outside:
            if np.linalg.norm(uu[list(self._outside)]) > tol * norm:
                return PointClass.OUTSIDE
        x = uu[list(self.index)]
        n2 = float(np.dot(x, x))
        if n2 <= (tol * norm) ** 2:
            return PointClass.RELATIVE_BOUNDARY
        q = self.quadratic_form(uu) / n2
        if q < -tol:
            return PointClass.OUTSIDE
        if self.sign * x[0] < 0:
            return PointClass.OUTSIDE
        if q <= tol:
            return PointClass.RELATIVE_BOUNDARY
        return PointClass.RELATIVE_INTERIOR

    def dual(self) -> LorentzCone:
        """Reciprocal weights, opposite time orientation, complementary free flag."""
        return LorentzCone(self.dim, self.index, 1.0 / self.weights, -self.sign, not self.free)

    def is_salient(self) -> bool:
        return not (self.free and self._outside)

    def span_basis(self) -> list[Vector]:
        coords = range(self.dim) if self.free else self.index
        return [np.eye(self.dim)[i] for i in sorted(coords)]

    def lineality_basis(self) -> list[Vector]:
        if not self.free:
            return []
        return [np.eye(self.dim)[i] for i in self._outside]

    def interior_point(self) -> Vector:
        return self.sign * np.eye(self.dim)[self.time_index]

    def boundary_direction(self, p: ArrayLike) -> Vector:
        """w = (-p0/c0, p1/c1, ..., pr/cr) placed on the index coordinates.

        For a covector p on the boundary of the dual cone, w spans C ∩ ker p;
        for p inside the dual cone, w / sqrt(q(w)) maximizes <p, .> on the
        unit hyperboloid.
        """
        pp = np.asarray(p, dtype=float)
        w = np.zeros(self.dim)
        coef = pp[list(self.index)] / self.weights
        coef[0] = -coef[0]
        w[list(self.index)] = coef
        return w

    def exposed_face(self, p: ArrayLike, tol: float = 1e-8) -> Face:
        if not self.is_salient():
            return super().exposed_face(p, tol)
        pp = self.check_vector(p, "covector")
        if self.annihilates(pp, tol):
            return Face(rays=(), whole_cone=True)
        if self.dual().classify_point(pp, tol) is not PointClass.RELATIVE_BOUNDARY:
            return Face()
        return Face(rays=(unit(self.boundary_direction(pp)),))

    def extreme_rays(self) -> list[Vector]:
        if len(self.index) != 2 or (self.free and self._outside):
            return super().extreme_rays()
        i0, i1 = self.index
        rays = []
        for s in (-1.0, 1.0):
            v = np.zeros(self.dim)
            v[i0] = self.sign / np.sqrt(self.weights[0])
            v[i1] = s / np.sqrt(self.weights[1])
            rays.append(unit(v))
        return rays

    def section_point(self, z: ArrayLike) -> Vector:
        """Point of the cross-section {sqrt(c0) sign u0 = 1} at ball coordinates z, |z| <= 1."""
        zz = np.asarray(z, dtype=float)
        v = np.zeros(self.dim)
        v[self.time_index] = self.sign / np.sqrt(self.weights[0])
        v[list(self.space_index)] = zz / np.sqrt(self.weights[1:])
        return v

    def _free_part(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        out = np.zeros((count, self.dim))
        if self.free and self._outside:
            out[:, list(self._outside)] = rng.standard_normal((count, len(self._outside)))
        return out

    def _sample(self, rng: np.random.Generator, count: int, radii: NDArray[np.float64]) -> NDArray[np.float64]:
        r = len(self.space_index)
        z = rng.standard_normal((count, r))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        z *= radii[:, None]
        scale = rng.uniform(0.2, 3.0, size=count)
        rows = np.array([self.section_point(zi) for zi in z]) * scale[:, None]
        return rows + self._free_part(rng, count)

    def sample_interior(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        return self._sample(rng, count, rng.uniform(0.0, 0.95, size=count))

    def sample_boundary(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        return self._sample(rng, count, np.ones(count))

    def nearest_boundary(self, p: ArrayLike) -> Vector:
        """Snap the time coordinate so that q = 0, keeping the space coordinates."""
        pp = self.check_vector(p).copy()
        space = pp[list(self.space_index)]
        if not np.any(space):
            space = np.zeros(len(self.space_index))
            space[0] = abs(pp[self.time_index]) * np.sqrt(self.weights[0] / self.weights[1])
            pp[list(self.space_index)] = space
            return pp
        pp[self.time_index] = self.sign * np.sqrt(np.dot(self.weights[1:], space**2) / self.weights[0])
        return pp

    def describe(self) -> str:
        labels = ", ".join(str(i + 1) for i in self.space_index)
        return (
            f"lorentz cone on ({self.time_index + 1}; {labels}) in R^{self.dim}, "
            f"weights {self.weights.tolist()}, sign {self.sign:+d}"
            + (", free complement" if self.free else "")
        )
