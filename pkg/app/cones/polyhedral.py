"""Polyhedral cones in generator (V) and halfspace (H) representation."""

from __future__ import annotations

import logging
from functools import cached_property
from itertools import combinations

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import null_space, orth
from scipy.optimize import linprog, nnls

from app.cones.base import DEFAULT_TOL, ConvexCone, Face, PointClass, Vector, unit
from app.exceptions import ConstructionError

logger = logging.getLogger(__name__)


def _as_rows(vectors: ArrayLike, what: str) -> NDArray[np.float64]:
    rows = np.atleast_2d(np.asarray(vectors, dtype=float))
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise ConstructionError(f"{what} must be a non-empty list of vectors")
    if not np.all(np.isfinite(rows)):
        raise ConstructionError(f"{what} must be finite")
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms == 0):
        raise ConstructionError(f"{what} must be nonzero")
    return rows / norms[:, None]


def _in_cone(generators: NDArray[np.float64], u: Vector, tol: float) -> bool:
    """Membership in cone(rows) through nonnegative least squares."""
    norm = float(np.linalg.norm(u))
    if norm == 0:
        return True
    _, residual = nnls(generators.T, u / norm)
    return bool(residual <= tol)


class PolyhedralCone(ConvexCone):
    """Cone generated by finitely many vectors, C = {sum λ_i g_i : λ >= 0}."""

    kind = "polyhedral"

    def __init__(self, generators: ArrayLike) -> None:
        rows = _as_rows(generators, "generators")
        super().__init__(rows.shape[1])
        self.generators = rows

    def classify_point(self, u: ArrayLike, tol: float = DEFAULT_TOL) -> PointClass:
        uu = self.check_vector(u)
        norm = float(np.linalg.norm(uu))
        if norm == 0.0:
            return PointClass.RELATIVE_BOUNDARY
        if not _in_cone(self.generators, uu, tol):
            return PointClass.OUTSIDE
        margin = self._interior_margin(uu / norm)
        if margin is None or margin <= tol:
            return PointClass.RELATIVE_BOUNDARY
        return PointClass.RELATIVE_INTERIOR

    def _interior_margin(self, u: Vector) -> float | None:
        """max t such that u = sum λ_i g_i with every λ_i >= t (capped at 1).

        For a salient cone u is in ri C iff such a representation with t > 0
        exists; the lineality generators are excluded from the margin.
        """
        m = self.generators.shape[0]
        c = np.zeros(m + 1)
        c[-1] = -1.0
        a_eq = np.hstack([self.generators.T, np.zeros((self.dim, 1))])
        free = set(self._lineality_generators)
        a_ub = []
        for i in range(m):
            if i in free:
                continue
            row = np.zeros(m + 1)
            row[i] = -1.0
            row[-1] = 1.0
            a_ub.append(row)
        bounds = [(None, None) if i in free else (0, None) for i in range(m)] + [(None, 1.0)]
        res = linprog(
            c,
            A_ub=np.array(a_ub) if a_ub else None,
            b_ub=np.zeros(len(a_ub)) if a_ub else None,
            A_eq=a_eq,
            b_eq=u,
            bounds=bounds,
            method="highs",
        )
        if res.status != 0:
            return None
        return float(-res.fun)

    @cached_property
    def _lineality_generators(self) -> tuple[int, ...]:
        return tuple(
            i for i, g in enumerate(self.generators) if _in_cone(self.generators, -g, 1e-9)
        )

    def dual(self) -> HalfspaceCone:
        return HalfspaceCone(self.generators)

    def is_salient(self) -> bool:
        """LP test: max sum λ subject to sum λ_i g_i = 0, 0 <= λ <= 1 is zero iff salient."""
        m = self.generators.shape[0]
        res = linprog(
            -np.ones(m),
            A_eq=self.generators.T,
            b_eq=np.zeros(self.dim),
            bounds=[(0.0, 1.0)] * m,
            method="highs",
        )
        return bool(res.status == 0 and -res.fun <= 1e-9)

    def span_basis(self) -> list[Vector]:
        return list(orth(self.generators.T).T)

    def lineality_basis(self) -> list[Vector]:
        idx = list(self._lineality_generators)
        if not idx:
            return []
        return list(orth(self.generators[idx].T).T)

    def interior_point(self) -> Vector:
        return unit(self.generators.sum(axis=0))

    def exposed_face(self, p: ArrayLike, tol: float = 1e-8) -> Face:
        pp = self.check_vector(p, "covector")
        scale = max(1.0, float(np.linalg.norm(pp)))
        values = self.generators @ pp
        zero = np.abs(values) <= tol * scale
        if np.all(zero):
            return Face(rays=(), whole_cone=True)
        return Face(rays=tuple(g.copy() for g in self.generators[zero]))

    def extreme_rays(self) -> list[Vector]:
        basis = self.span_basis()
        if len(basis) != 2 or not self.is_salient():
            return super().extreme_rays()
        q = np.column_stack(basis)
        center = q.T @ self.interior_point()
        angles = []
        for g in self.generators:
            x = q.T @ g
            angles.append(np.arctan2(center[0] * x[1] - center[1] * x[0], center @ x))
        lo, hi = int(np.argmin(angles)), int(np.argmax(angles))
        return [self.generators[lo].copy(), self.generators[hi].copy()]

    def sample_interior(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        weights = rng.uniform(0.1, 1.0, size=(count, self.generators.shape[0]))
        return weights @ self.generators

    def describe(self) -> str:
        return f"polyhedral cone with {self.generators.shape[0]} generators in R^{self.dim}"


class HalfspaceCone(ConvexCone):
    """Cone {p : <n_i, p> <= 0 for every normal n_i}.

    Arises as the negative dual of a polyhedral cone and dualizes back to the
    cone generated by its normals.
    """

    kind = "halfspace"

    def __init__(self, normals: ArrayLike) -> None:
        rows = _as_rows(normals, "normals")
        super().__init__(rows.shape[1])
        self.normals = rows

    @cached_property
    def _equality_rows(self) -> tuple[int, ...]:
        """Constraints that hold with equality on the whole cone."""
        return tuple(i for i, n in enumerate(self.normals) if _in_cone(self.normals, -n, 1e-9))

    def classify_point(self, u: ArrayLike, tol: float = DEFAULT_TOL) -> PointClass:
        uu = self.check_vector(u)
        norm = float(np.linalg.norm(uu))
        if norm == 0.0:
            return PointClass.RELATIVE_BOUNDARY
        values = self.normals @ (uu / norm)
        if np.max(values) > tol:
            return PointClass.OUTSIDE
        eq = set(self._equality_rows)
        if any(abs(values[i]) > tol for i in eq):
            return PointClass.OUTSIDE
        strict = [values[i] for i in range(len(values)) if i not in eq]
        if not strict or max(strict) < -tol:
            return PointClass.RELATIVE_INTERIOR
        return PointClass.RELATIVE_BOUNDARY

    def dual(self) -> PolyhedralCone:
        return PolyhedralCone(self.normals)

    def is_salient(self) -> bool:
        return bool(np.linalg.matrix_rank(self.normals) == self.dim)

    def span_basis(self) -> list[Vector]:
        eq = list(self._equality_rows)
        if not eq:
            return list(np.eye(self.dim))
        return list(null_space(self.normals[eq]).T)

    def lineality_basis(self) -> list[Vector]:
        return list(null_space(self.normals).T)

    def interior_point(self) -> Vector:
        """Solve max t s.t. <n_i, p> + t <= 0 off the equality rows, |p|_inf <= 1."""
        eq = set(self._equality_rows)
        strict = [i for i in range(len(self.normals)) if i not in eq]
        if not strict:
            return unit(self.span_basis()[0])
        c = np.zeros(self.dim + 1)
        c[-1] = -1.0
        a_ub = np.hstack([self.normals[strict], np.ones((len(strict), 1))])
        a_eq = np.hstack([self.normals[list(eq)], np.zeros((len(eq), 1))]) if eq else None
        res = linprog(
            c,
            A_ub=a_ub,
            b_ub=np.zeros(len(strict)),
            A_eq=a_eq,
            b_eq=np.zeros(len(eq)) if eq else None,
            bounds=[(-1.0, 1.0)] * self.dim + [(None, 1.0)],
            method="highs",
        )
        if res.status != 0 or -res.fun <= 0:
            logger.warning("Halfspace cone has empty relative interior search result")
            return np.zeros(self.dim)
        p = res.x[:-1]
        # drop the lineality component so the point is well inside
        lin = self.lineality_basis()
        for v in lin:
            p = p - np.dot(p, v) * v
        return unit(p)

    def sample_interior(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        dual = self.dual()
        rays = _extreme_rays_of_dual(dual)
        rows = rng.uniform(0.1, 1.0, size=(count, len(rays))) @ np.array(rays)
        lin = self.lineality_basis()
        if lin:
            rows = rows + rng.standard_normal((count, len(lin))) @ np.array(lin)
        return rows

    def nearest_boundary(self, p: ArrayLike) -> Vector:
        """Closest point of rb among the projections onto the bounding hyperplanes."""
        pp = self.check_vector(p)
        eq = set(self._equality_rows)
        best: Vector | None = None
        best_dist = np.inf
        for i, n in enumerate(self.normals):
            if i in eq:
                continue
            cand = pp - np.dot(n, pp) * n
            if self.contains(cand, 1e-9):
                dist = float(np.linalg.norm(cand - pp))
                if dist < best_dist:
                    best, best_dist = cand, dist
        if best is None:
            return super().nearest_boundary(pp)
        return best

    def describe(self) -> str:
        return f"halfspace cone with {self.normals.shape[0]} constraints in R^{self.dim}"


def _extreme_rays_of_dual(cone: PolyhedralCone) -> list[Vector]:
    """Extreme rays of the halfspace cone dual to ``cone``, by vertex enumeration.

    A ray is the one-dimensional intersection of dim - lineality - 1 active
    constraints; desk-scale cones keep the enumeration small.
    """
    normals = cone.generators
    n = cone.dim
    lin = null_space(normals)
    k = n - lin.shape[1]
    rays: list[Vector] = []
    if k <= 0:
        return [np.zeros(n)]
    if k == 1:
        # the cone is a halfline plus lineality
        v = -unit(normals[0])
        return [v]
    for subset in combinations(range(normals.shape[0]), k - 1):
        m = np.vstack([normals[list(subset)], lin.T]) if lin.size else normals[list(subset)]
        ns = null_space(m)
        if ns.shape[1] != 1:
            continue
        for v in (ns[:, 0], -ns[:, 0]):
            if np.all(normals @ v <= 1e-9) and not any(np.allclose(v, r) for r in rays):
                rays.append(unit(v))
    return rays
