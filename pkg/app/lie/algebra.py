"""Lie algebras given by structure constants.

The bracket is ``[e_i, e_j] = sum_k c[k, i, j] e_k``. Covectors are
coordinates ``h_i = <h, e_i>`` and the Lie-Poisson structure on g* is
``{h_i, h_j}(h) = <h, [e_i, e_j]>``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import orth

from app.exceptions import ConstructionError, DimensionMismatchError

logger = logging.getLogger(__name__)

Vector = NDArray[np.float64]

ANTISYMMETRY_TOL = 0.0
JACOBI_TOL = 1e-12


@dataclass(frozen=True)
class Violation:
    """A failed structure-constant identity."""

    kind: str
    indices: tuple[int, ...]
    residual: float

    def __str__(self) -> str:
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.kind} violated at ({idx}): residual {self.residual:.3e}"


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    """Finite-dimensional real Lie algebra in a fixed basis.

    Attributes:
        structure_constants: Array ``c`` of shape (n, n, n), ``c[k, i, j]`` is the
            e_k-coefficient of [e_i, e_j]
        basis_labels: One label per basis vector
    """

    structure_constants: NDArray[np.float64]
    basis_labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        c = np.asarray(self.structure_constants, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise ConstructionError(
                f"structure constants must have shape (n, n, n), got {c.shape}"
            )
        if not np.all(np.isfinite(c)):
            raise ConstructionError("structure constants must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "structure_constants", c)
        labels = tuple(self.basis_labels) or tuple(f"e{i + 1}" for i in range(c.shape[0]))
        if len(labels) != c.shape[0]:
            raise ConstructionError(
                f"{len(labels)} basis labels given for dimension {c.shape[0]}"
            )
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return int(self.structure_constants.shape[0])

    @classmethod
    def abelian(cls, dim: int, labels: Sequence[str] = ()) -> LieAlgebraSpec:
        """Abelian algebra R^n (all brackets zero)."""
        return cls(np.zeros((dim, dim, dim)), tuple(labels))

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        brackets: Iterable[tuple[int, int, int, float]],
        labels: Sequence[str] = (),
    ) -> LieAlgebraSpec:
        """Build an algebra from 1-based triples ``(i, j, k, value)``.

        Each triple states that [e_i, e_j] has e_k-coefficient ``value``; the
        antisymmetric entry is filled in automatically.

        Raises:
            ConstructionError: On out-of-range indices, i == j, or two triples
                assigning conflicting values to the same entry
        """
        c = np.zeros((dim, dim, dim))
        assigned: dict[tuple[int, int, int], float] = {}
        for i, j, k, value in brackets:
            if not all(1 <= x <= dim for x in (i, j, k)):
                raise ConstructionError(f"bracket index out of range in ({i}, {j}, {k})")
            if i == j:
                if value != 0:
                    raise ConstructionError(f"[e{i}, e{i}] must vanish")
                continue
            key, sign = ((i, j, k), 1.0) if i < j else ((j, i, k), -1.0)
            signed = sign * float(value)
            if key in assigned and assigned[key] != signed:
                raise ConstructionError(f"conflicting values for bracket {key}")
            assigned[key] = signed
            a, b, e = key[0] - 1, key[1] - 1, key[2] - 1
            c[e, a, b] = signed
            c[e, b, a] = -signed
        return cls(c, tuple(labels))

    def check_vector(self, x: ArrayLike, what: str = "vector") -> Vector:
        """Return ``x`` as a float array after a dimension check."""
        arr = np.asarray(x, dtype=float)
        if arr.shape != (self.dim,):
            raise DimensionMismatchError(self.dim, int(arr.size), what)
        return arr

    @cached_property
    def ad_matrices(self) -> NDArray[np.float64]:
        """``ad[i]`` is the matrix of ad_{e_i} acting on coordinates."""
        return np.transpose(self.structure_constants, (1, 0, 2))

    def bracket_matrix(self, basis: Sequence[Vector]) -> NDArray[np.float64]:
        """Brackets of a list of vectors, stacked as rows [v_a, v_b]."""
        return np.array([bracket(self, a, b) for a in basis for b in basis])

    @cached_property
    def lower_central_dims(self) -> tuple[int, ...]:
        """Dimensions of g = g_1 ⊃ g_2 = [g, g_1] ⊃ ... until it stabilizes."""
        dims = [self.dim]
        current = np.eye(self.dim)
        while current.shape[1] > 0:
            products = np.einsum("kij,ia,jb->kab", self.structure_constants, np.eye(self.dim), current)
            span = products.reshape(self.dim, -1)
            nxt = orth(span) if np.any(span) else np.zeros((self.dim, 0))
            if nxt.shape[1] == current.shape[1]:
                break
            dims.append(int(nxt.shape[1]))
            current = nxt
        return tuple(dims)

    @property
    def nilpotency_step(self) -> int | None:
        """Step s with g_{s+1} = 0, or None when the algebra is not nilpotent."""
        dims = self.lower_central_dims
        if dims[-1] != 0:
            return None
        return max(len(dims) - 1, 1)


def bracket(a: LieAlgebraSpec, u: ArrayLike, v: ArrayLike) -> Vector:
    """Lie bracket [u, v] = sum c[k, i, j] u_i v_j e_k.

    Raises:
        DimensionMismatchError: If u or v has the wrong length
    """
    uu = a.check_vector(u)
    vv = a.check_vector(v)
    return np.einsum("kij,i,j->k", a.structure_constants, uu, vv)


def poisson_rhs(a: LieAlgebraSpec, h: ArrayLike, u: ArrayLike) -> Vector:
    """Right-hand side of the conjugate subsystem for a constant control.

    ``dh_i/dt = {H_u, h_i} = sum_j u_j {h_j, h_i}`` with
    ``{h_j, h_i}(h) = sum_k c[k, j, i] h_k`` and ``H_u = <h, u>``.

    Raises:
        DimensionMismatchError: If h or u has the wrong length
    """
    hh = a.check_vector(h, "covector")
    uu = a.check_vector(u)
    return np.einsum("kji,j,k->i", a.structure_constants, uu, hh)


def validate(a: LieAlgebraSpec) -> list[Violation]:
    """Check antisymmetry (exact) and the Jacobi identity (1e-12 per entry).

    Returns:
        Violations with 1-based indices; empty when the algebra is valid
    """
    c = a.structure_constants
    violations: list[Violation] = []

    asym = c + np.transpose(c, (0, 2, 1))
    for k, i, j in zip(*np.nonzero(np.abs(asym) > ANTISYMMETRY_TOL), strict=True):
        if i <= j:
            violations.append(
                Violation("antisymmetry", (int(k) + 1, int(i) + 1, int(j) + 1), float(asym[k, i, j]))
            )

    # J[l, i, j, k] = sum_m c[m,i,j] c[l,m,k] + c[m,j,k] c[l,m,i] + c[m,k,i] c[l,m,j]
    jac = (
        np.einsum("mij,lmk->lijk", c, c)
        + np.einsum("mjk,lmi->lijk", c, c)
        + np.einsum("mki,lmj->lijk", c, c)
    )
    for l_, i, j, k in zip(*np.nonzero(np.abs(jac) > JACOBI_TOL), strict=True):
        if i < j < k:
            violations.append(
                Violation(
                    "jacobi",
                    (int(l_) + 1, int(i) + 1, int(j) + 1, int(k) + 1),
                    float(jac[l_, i, j, k]),
                )
            )

    if violations:
        logger.info("Algebra validation found %d violations", len(violations))
    return violations


def heisenberg() -> LieAlgebraSpec:
    """Heisenberg algebra with [e1, e2] = e3."""
    return LieAlgebraSpec.from_brackets(3, [(1, 2, 3, 1.0)], ("e1", "e2", "e3"))


def free_carnot_r2s4() -> LieAlgebraSpec:
    """Free nilpotent algebra of rank 2 and step 4 (dimension 8)."""
    relations = [
        (1, 2, 3, 1.0),
        (1, 3, 4, 1.0),
        (2, 3, 5, 1.0),
        (1, 4, 6, 1.0),
        (1, 5, 7, 1.0),
        (2, 4, 7, 1.0),
        (2, 5, 8, 1.0),
    ]
    return LieAlgebraSpec.from_brackets(8, relations, tuple(f"X{i}" for i in range(1, 9)))
