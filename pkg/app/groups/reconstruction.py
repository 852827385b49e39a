"""Horizontal curve reconstruction: exact exponential steps and corner curves."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import null_space

from app.exceptions import ConstructionError, DimensionMismatchError, UnsupportedOperationError
from app.groups.models import GroupElement, GroupModel
from app.lie.algebra import LieAlgebraSpec, Vector, bracket

logger = logging.getLogger(__name__)

CONTACT_TOL = 1e-12


def step(gm: GroupModel, g: GroupElement, u: ArrayLike, dt: float) -> GroupElement:
    """Left-invariant update g · exp(dt u), exact for constant u.

    Raises:
        ValueError: If dt is not positive
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    return gm.multiply(g, gm.exp(dt * np.asarray(u, dtype=float)))


def magnus_increment(algebra: LieAlgebraSpec, stage_controls: Sequence[Vector], dt: float) -> Vector:
    """Fourth-order increment dt/6 (u1 + 2 u2 + 2 u3 + u4) + dt^2/12 [u1, u4].

    The four controls are the Runge-Kutta stage controls of one step.
    """
    u1, u2, u3, u4 = (np.asarray(u, dtype=float) for u in stage_controls)
    omega = dt / 6.0 * (u1 + 2.0 * u2 + 2.0 * u3 + u4)
    return omega + dt * dt / 12.0 * bracket(algebra, u1, u4)


def magnus_step(gm: GroupModel, g: GroupElement, stage_controls: Sequence[Vector], dt: float) -> GroupElement:
    """g · exp(Ω) with Ω from :func:`magnus_increment`."""
    omega = magnus_increment(gm.algebra, stage_controls, dt)
    return gm.multiply(g, gm.exp(omega))


def sample_times(t_end: float, dt: float) -> NDArray[np.float64]:
    """Grid i·dt on [0, t_end], with t_end appended when it is off the grid."""
    if dt <= 0 or t_end < 0:
        raise ValueError("need dt > 0 and t_end >= 0")
    count = int(np.floor(t_end / dt + 1e-9))
    times = dt * np.arange(count + 1)
    if t_end - times[-1] > 1e-9 * max(1.0, t_end):
        times = np.append(times, t_end)
    return times


def corner_trajectory(
    gm: GroupModel,
    t_bar: float,
    k: float,
    T: float,
    dt: float | None = None,
) -> list[GroupElement]:
    """Closed-form light-like corner through the first two basis directions.

    g(t) = exp(t (X1 + X2)) for t <= t_bar and
    g(t) = exp(t_bar (X1 + X2)) · exp((t - t_bar) k (X1 - X2)) afterwards.

    Args:
        gm: Group model whose algebra has dimension at least 2
        t_bar: Corner time, 0 <= t_bar <= T
        k: Speed along the second leg, k > 0
        T: Final time
        dt: Sample spacing; defaults to T / 100

    Returns:
        Group elements at the times of :func:`sample_times`
    """
    if gm.dim < 2:
        raise DimensionMismatchError(2, gm.dim, "algebra dimension for a corner")
    if not 0.0 <= t_bar <= T:
        raise ValueError("need 0 <= t_bar <= T")
    if k <= 0:
        raise ValueError("k must be positive")
    spacing = T / 100.0 if dt is None else dt
    first = np.zeros(gm.dim)
    first[0] = first[1] = 1.0
    second = np.zeros(gm.dim)
    second[0], second[1] = k, -k
    corner = gm.exp(t_bar * first)
    out = []
    for t in sample_times(T, spacing) if T > 0 else np.zeros(1):
        if t <= t_bar:
            out.append(gm.exp(t * first))
        else:
            out.append(gm.multiply(corner, gm.exp((t - t_bar) * second)))
    return out


def contact_test(a: LieAlgebraSpec, dist_basis: Sequence[ArrayLike]) -> bool:
    """Contact condition for a left-invariant plane field on a 3-dimensional group.

    With ω the annihilator of span{v1, v2}, the distribution is contact iff
    ⟨ω, [v1, v2]⟩ != 0.

    Raises:
        UnsupportedOperationError: If the algebra is not 3-dimensional
        ConstructionError: If the vectors do not span a plane
    """
    if a.dim != 3:
        raise UnsupportedOperationError(f"contact test needs a 3-dimensional algebra, got {a.dim}")
    if len(dist_basis) != 2:
        raise ConstructionError("a plane field needs exactly two basis vectors")
    v1, v2 = (a.check_vector(v, "distribution vector") for v in dist_basis)
    rows = np.vstack([v1, v2])
    if np.linalg.matrix_rank(rows) != 2:
        raise ConstructionError("distribution vectors are linearly dependent")
    omega = null_space(rows)[:, 0]
    pairing = float(np.dot(omega, bracket(a, v1, v2)))
    scale = np.linalg.norm(v1) * np.linalg.norm(v2)
    contact = abs(pairing) > CONTACT_TOL * max(1.0, scale)
    logger.debug("Contact pairing %.3e for distribution %s", pairing, rows.tolist())
    return contact
