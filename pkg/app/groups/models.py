"""Group models: identity, product, exponential and canonical chart."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import expm

from app.exceptions import ConstructionError, DimensionMismatchError
from app.lie.algebra import LieAlgebraSpec, Vector, bracket

logger = logging.getLogger(__name__)

GroupElement = NDArray[np.float64]

MAX_BCH_STEP = 4


class GroupModel(ABC):
    """Connected Lie group with a fixed Lie algebra.

    Elements are numpy arrays in the model's internal representation;
    ``chart`` maps them to the coordinates used in exports.
    """

    kind: str = "group"

    def __init__(self, algebra: LieAlgebraSpec) -> None:
        self.algebra = algebra

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @abstractmethod
    def identity(self) -> GroupElement: ...

    @abstractmethod
    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement: ...

    @abstractmethod
    def exp(self, u: ArrayLike) -> GroupElement: ...

    @abstractmethod
    def chart(self, g: GroupElement) -> Vector:
        """Canonical chart coordinates of ``g``."""

    @abstractmethod
    def from_chart(self, coords: ArrayLike) -> GroupElement: ...

    @property
    def chart_labels(self) -> tuple[str, ...]:
        return self.algebra.basis_labels

    def _vector(self, u: ArrayLike) -> Vector:
        return self.algebra.check_vector(u)

    def describe(self) -> str:
        return f"{self.kind} model of a {self.dim}-dimensional group"


class AbelianGroup(GroupModel):
    """R^n with addition; exp is the identity map."""

    kind = "abelian"

    def identity(self) -> GroupElement:
        return np.zeros(self.dim)

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return np.asarray(a, dtype=float) + np.asarray(b, dtype=float)

    def exp(self, u: ArrayLike) -> GroupElement:
        return self._vector(u).copy()

    def chart(self, g: GroupElement) -> Vector:
        return np.asarray(g, dtype=float).copy()

    def from_chart(self, coords: ArrayLike) -> GroupElement:
        return self._vector(coords).copy()


class ExpCoordinatesGroup(GroupModel):
    """Exponential coordinates of the first kind on a nilpotent group.

    The product is the Baker-Campbell-Hausdorff series, exact up to step 4:
    Z = X + Y + [X,Y]/2 + ([X,[X,Y]] + [Y,[Y,X]])/12 - [Y,[X,[X,Y]]]/24.

    Raises:
        ConstructionError: If the algebra is not nilpotent of step <= 4
    """

    kind = "exp_coordinates"

    def __init__(self, algebra: LieAlgebraSpec) -> None:
        super().__init__(algebra)
        step = algebra.nilpotency_step
        if step is None:
            raise ConstructionError("exponential coordinates need a nilpotent algebra")
        if step > MAX_BCH_STEP:
            raise ConstructionError(f"nilpotency step {step} exceeds {MAX_BCH_STEP}")
        self.step = step

    def identity(self) -> GroupElement:
        return np.zeros(self.dim)

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        x = self._vector(a)
        y = self._vector(b)
        z = x + y
        if self.step < 2:
            return z
        a_ = self.algebra
        xy = bracket(a_, x, y)
        z = z + 0.5 * xy
        if self.step < 3:
            return z
        x_xy = bracket(a_, x, xy)
        z = z + (x_xy - bracket(a_, y, xy)) / 12.0
        if self.step < 4:
            return z
        return z - bracket(a_, y, x_xy) / 24.0

    def exp(self, u: ArrayLike) -> GroupElement:
        return self._vector(u).copy()

    def chart(self, g: GroupElement) -> Vector:
        return np.asarray(g, dtype=float).copy()

    def from_chart(self, coords: ArrayLike) -> GroupElement:
        return self._vector(coords).copy()


class MatrixNilpotentGroup(GroupModel):
    """Unipotent upper-triangular matrix representation.

    Args:
        algebra: The Lie algebra
        basis_matrices: Strictly upper-triangular matrices E_i, one per basis
            vector, with [E_i, E_j] = sum c[k, i, j] E_k
        chart_map: Optional map from a matrix to chart coordinates; defaults to
            exponential coordinates via the (finite) matrix logarithm
        chart_inverse: Inverse of ``chart_map``
    """

    kind = "matrix_nilpotent"

    def __init__(
        self,
        algebra: LieAlgebraSpec,
        basis_matrices: ArrayLike,
        chart_map: Callable[[GroupElement], Vector] | None = None,
        chart_inverse: Callable[[Vector], GroupElement] | None = None,
        chart_labels: tuple[str, ...] | None = None,
    ) -> None:
        super().__init__(algebra)
        mats = np.asarray(basis_matrices, dtype=float)
        if mats.ndim != 3 or mats.shape[0] != algebra.dim or mats.shape[1] != mats.shape[2]:
            raise ConstructionError("need one square matrix per basis vector")
        if np.any(np.tril(mats)):
            raise ConstructionError("basis matrices must be strictly upper triangular")
        c = algebra.structure_constants
        for i in range(algebra.dim):
            for j in range(i + 1, algebra.dim):
                comm = mats[i] @ mats[j] - mats[j] @ mats[i]
                expected = np.einsum("k,kab->ab", c[:, i, j], mats)
                if not np.allclose(comm, expected, atol=1e-12):
                    raise ConstructionError(f"matrices do not represent the bracket [e{i + 1}, e{j + 1}]")
        flat = mats.reshape(algebra.dim, -1).T
        if np.linalg.matrix_rank(flat) < algebra.dim:
            raise ConstructionError("matrix representation is not faithful")
        self.basis_matrices = mats
        self._flat = flat
        self._chart_map = chart_map
        self._chart_inverse = chart_inverse
        self._labels = chart_labels
        self.size = mats.shape[1]

    @property
    def chart_labels(self) -> tuple[str, ...]:
        return self._labels or self.algebra.basis_labels

    def identity(self) -> GroupElement:
        return np.eye(self.size)

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return np.asarray(a, dtype=float) @ np.asarray(b, dtype=float)

    def algebra_matrix(self, u: ArrayLike) -> NDArray[np.float64]:
        return np.einsum("k,kab->ab", self._vector(u), self.basis_matrices)

    def exp(self, u: ArrayLike) -> GroupElement:
        return expm(self.algebra_matrix(u))

    def log(self, g: GroupElement) -> Vector:
        """Exponential coordinates of a unipotent matrix (finite series)."""
        n = np.asarray(g, dtype=float) - np.eye(self.size)
        term = np.eye(self.size)
        total = np.zeros_like(n)
        for k in range(1, self.size):
            term = term @ n
            total += ((-1) ** (k + 1)) * term / k
        coords, *_ = np.linalg.lstsq(self._flat, total.ravel(), rcond=None)
        return coords

    def chart(self, g: GroupElement) -> Vector:
        if self._chart_map is not None:
            return np.asarray(self._chart_map(g), dtype=float)
        return self.log(g)

    def from_chart(self, coords: ArrayLike) -> GroupElement:
        cc = np.asarray(coords, dtype=float)
        if cc.shape != (self.dim,):
            raise DimensionMismatchError(self.dim, int(cc.size), "chart coordinates")
        if self._chart_inverse is not None:
            return self._chart_inverse(cc)
        return self.exp(cc)


def _heisenberg_chart(g: GroupElement) -> Vector:
    a, b = g[0, 1], g[1, 2]
    return np.array([a, b, 2.0 * g[0, 2] - a * b])


def _heisenberg_chart_inverse(coords: Vector) -> GroupElement:
    a, b, c = coords
    return np.array([[1.0, a, 0.5 * (c + a * b)], [0.0, 1.0, b], [0.0, 0.0, 1.0]])


def heisenberg_matrix_group(algebra: LieAlgebraSpec) -> MatrixNilpotentGroup:
    """3x3 unipotent model with E1 = E12, E2 = E23, E3 = E13.

    The chart (a, b, c) = (M12, M23, 2 M13 - M12 M23) turns the product into
    (a1 + a2, b1 + b2, c1 + c2 + a1 b2 - a2 b1); exponential coordinates
    (x, y, z) have chart (x, y, 2z).
    """
    mats = np.zeros((3, 3, 3))
    mats[0, 0, 1] = 1.0
    mats[1, 1, 2] = 1.0
    mats[2, 0, 2] = 1.0
    return MatrixNilpotentGroup(
        algebra,
        mats,
        chart_map=_heisenberg_chart,
        chart_inverse=_heisenberg_chart_inverse,
        chart_labels=("a", "b", "c"),
    )
