"""Cone-level operations and randomized duality checks."""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike

from app.cones.base import DEFAULT_TOL, ConvexCone, PointClass, Vector, unit

logger = logging.getLogger(__name__)


def classify_point(cone: ConvexCone, u: ArrayLike, tol: float = DEFAULT_TOL) -> PointClass:
    """Classify ``u`` relative to the affine hull of ``cone``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return cone.classify_point(u, tol)


def dual_cone(cone: ConvexCone) -> ConvexCone:
    """Closed-form negative dual cone."""
    return cone.dual()


def is_salient(cone: ConvexCone) -> bool:
    return cone.is_salient()


def span_basis(cone: ConvexCone) -> list[Vector]:
    return cone.span_basis()


def bipolar_violation(cone: ConvexCone, rng: np.random.Generator, samples: int = 200) -> float:
    """Largest <p, u> over random unit u in C and unit p in the dual cone.

    A correct dual gives a value <= 0 up to roundoff.
    """
    dual = cone.dual()
    us = np.vstack([cone.sample_interior(rng, samples // 2), cone.sample_boundary(rng, samples - samples // 2)])
    ps = np.vstack([dual.sample_interior(rng, samples // 2), dual.sample_boundary(rng, samples - samples // 2)])
    us = us / np.maximum(np.linalg.norm(us, axis=1, keepdims=True), 1e-300)
    ps = ps / np.maximum(np.linalg.norm(ps, axis=1, keepdims=True), 1e-300)
    return float(np.max(ps @ us.T))


def negativity_margin(cone: ConvexCone, p: ArrayLike, rng: np.random.Generator, samples: int = 500) -> float:
    """min over sampled unit u in C of -<p, u>, including the extreme boundary.

    Strictly positive for p in ri of the dual of a salient cone.
    """
    pp = cone.check_vector(p, "covector")
    us = np.vstack([cone.sample_interior(rng, samples), cone.sample_boundary(rng, samples)])
    us = us[np.linalg.norm(us, axis=1) > 0]
    us = us / np.linalg.norm(us, axis=1, keepdims=True)
    return float(np.min(-(us @ pp)))


def boundary_annihilated_direction(cone: ConvexCone, p: ArrayLike) -> Vector | None:
    """A unit u in rb C with <p, u> = 0 for p on the boundary of the dual cone.

    Returns None when p is not on rb of the dual, or when p vanishes on C.
    """
    pp = cone.check_vector(p, "covector")
    if cone.dual().classify_point(pp) is not PointClass.RELATIVE_BOUNDARY or cone.annihilates(pp):
        return None
    face = cone.exposed_face(pp)
    if not face.rays:
        logger.info("Empty exposed face for boundary covector %s", pp)
        return None
    return unit(face.rays[0])
