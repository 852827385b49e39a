"""Common interface of closed convex cones in g or g*."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.exceptions import DimensionMismatchError, UnsupportedOperationError

logger = logging.getLogger(__name__)

Vector = NDArray[np.float64]

DEFAULT_TOL = 1e-9
BOUNDARY_BISECTIONS = 80


class PointClass(str, Enum):
    """Position of a point relative to a cone, measured in its affine hull."""

    OUTSIDE = "Outside"
    RELATIVE_BOUNDARY = "RelativeBoundary"
    RELATIVE_INTERIOR = "RelativeInterior"


@dataclass(frozen=True)
class Face:
    """Exposed face C ∩ ker p of a cone.

    Attributes:
        rays: Unit generators of the face (empty for the face {0})
        whole_cone: True when p vanishes on the whole cone
    """

    rays: tuple[Vector, ...] = field(default=())
    whole_cone: bool = False

    @property
    def is_trivial(self) -> bool:
        return not self.rays and not self.whole_cone


def unit(v: ArrayLike) -> Vector:
    arr = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(arr))
    return arr / norm if norm > 0 else arr


class ConvexCone(ABC):
    """Closed convex cone in R^n with membership and duality oracles.

    Subclasses describe one representation each. Classification is relative
    to the affine hull (span) of the cone and is scale invariant.
    """

    kind: str = "cone"

    def __init__(self, ambient_dim: int) -> None:
        if ambient_dim < 1:
            raise DimensionMismatchError(1, ambient_dim, "ambient dimension")
        self._dim = ambient_dim

    @property
    def dim(self) -> int:
        """Dimension of the ambient space."""
        return self._dim

    def check_vector(self, x: ArrayLike, what: str = "vector") -> Vector:
        arr = np.asarray(x, dtype=float)
        if arr.shape != (self._dim,):
            raise DimensionMismatchError(self._dim, int(arr.size), what)
        return arr

    @abstractmethod
    def classify_point(self, u: ArrayLike, tol: float = DEFAULT_TOL) -> PointClass:
        """Classify ``u`` as outside, on the relative boundary, or in the relative interior."""

    @abstractmethod
    def dual(self) -> ConvexCone:
        """Negative dual cone {p : <p, u> <= 0 for all u in C}."""

    @abstractmethod
    def is_salient(self) -> bool:
        """True iff the cone contains no line."""

    @abstractmethod
    def span_basis(self) -> list[Vector]:
        """Orthonormal basis of span C."""

    @abstractmethod
    def lineality_basis(self) -> list[Vector]:
        """Orthonormal basis of the largest subspace contained in C."""

    @abstractmethod
    def interior_point(self) -> Vector:
        """A unit vector in the relative interior."""

    @abstractmethod
    def sample_interior(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        """Random points of ri C, one per row."""

    def contains(self, u: ArrayLike, tol: float = DEFAULT_TOL) -> bool:
        return self.classify_point(u, tol) is not PointClass.OUTSIDE

    @cached_property
    def span_projector(self) -> NDArray[np.float64]:
        """Orthogonal projector onto span C."""
        basis = self.span_basis()
        if not basis:
            return np.zeros((self._dim, self._dim))
        q = np.column_stack(basis)
        return q @ q.T

    @property
    def span_dim(self) -> int:
        return len(self.span_basis())

    def annihilates(self, p: ArrayLike, tol: float = 1e-10) -> bool:
        """True when the covector ``p`` vanishes on span C."""
        pp = self.check_vector(p, "covector")
        return bool(np.linalg.norm(self.span_projector @ pp) <= tol * max(1.0, float(np.linalg.norm(pp))))

    def exposed_face(self, p: ArrayLike, tol: float = 1e-8) -> Face:
        """Exposed face C ∩ ker p for a covector p in the dual cone."""
        raise UnsupportedOperationError(f"exposed faces are not available for {self.kind} cones")

    def extreme_rays(self) -> list[Vector]:
        """The two unit boundary rays of a cone with two-dimensional span."""
        raise UnsupportedOperationError(f"extreme rays are not available for {self.kind} cones")

    def sample_boundary(self, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
        """Random points of rb C found by shooting from ri C along random directions."""
        rows = []
        proj = self.span_projector
        for x in self.sample_interior(rng, count):
            d = proj @ rng.standard_normal(self._dim)
            if not np.any(d):
                rows.append(np.zeros(self._dim))
                continue
            rows.append(self._boundary_along(x, unit(d)))
        return np.array(rows)

    def sample_outside(self, rng: np.random.Generator, count: int, attempts: int = 50) -> NDArray[np.float64]:
        """Random unit vectors that are not in C."""
        rows: list[Vector] = []
        for _ in range(count * attempts):
            v = unit(rng.standard_normal(self._dim))
            if self.classify_point(v, 1e-6) is PointClass.OUTSIDE:
                rows.append(v)
                if len(rows) == count:
                    break
        return np.array(rows).reshape(len(rows), self._dim)

    def nearest_boundary(self, p: ArrayLike) -> Vector:
        """A point of rb C close to ``p``; ``p`` is expected near the boundary."""
        pp = self.check_vector(p)
        cls = self.classify_point(pp)
        if cls is PointClass.RELATIVE_BOUNDARY:
            return pp
        center = self.interior_point() * max(1.0, float(np.linalg.norm(pp)))
        if cls is PointClass.RELATIVE_INTERIOR:
            direction = self.span_projector @ (pp - center)
            if not np.any(direction):
                direction = self.span_projector @ np.ones(self._dim)
            return self._boundary_along(pp, unit(direction))
        # outside: walk back toward the interior
        lo, hi = center, pp
        for _ in range(BOUNDARY_BISECTIONS):
            mid = 0.5 * (lo + hi)
            if self.contains(mid):
                lo = mid
            else:
                hi = mid
        return lo

    def _boundary_along(self, x: Vector, d: Vector) -> Vector:
        """Last point of C on the ray x + t d, t >= 0 (x in ri C)."""
        scale = max(1.0, float(np.linalg.norm(x)))
        hi = scale
        while self.contains(x + hi * d):
            hi *= 2.0
            if hi > 1e12 * scale:
                logger.debug("Direction %s stays in the cone", d)
                return x + hi * d
        lo = 0.0
        for _ in range(BOUNDARY_BISECTIONS):
            mid = 0.5 * (lo + hi)
            if self.contains(x + mid * d):
                lo = mid
            else:
                hi = mid
        return x + lo * d

    def describe(self) -> str:
        return f"{self.kind} cone in R^{self._dim}"

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"
