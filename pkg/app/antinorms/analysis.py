"""Axiom checks and boundary linearity of antinorms."""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import NDArray

from app.antinorms.base import NEG_INF, Antinorm, is_finite
from app.antinorms.oracle import maximizer_set
from app.antinorms.schemas import AxiomReport, DualResultRecord, MaximizerSetRecord
from app.cones.base import PointClass, Vector, unit
from app.cones.lorentz import LorentzCone
from app.cones.sector import SectorCone
from app.exceptions import ConeLieError

logger = logging.getLogger(__name__)

HOMOGENEITY_TOL = 1e-10
SUPERADDITIVITY_TOL = 1e-10
BOUNDARY_VALUE_TOL = 1e-8
DUAL_BOUNDARY_TOL = 1e-8
MAX_DUAL_BOUNDARY_SAMPLES = 40


def check_axioms(antinorm: Antinorm, samples: int = 500, seed: int | None = None) -> AxiomReport:
    """Randomized check of positivity, homogeneity and superadditivity.

    Also evaluates α∨ on sampled relative-boundary points of the dual cone
    (annihilators of C excluded); the dual is an antinorm when it vanishes
    there.
    """
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    settings = antinorm.settings
    rng = np.random.default_rng(settings.random_seed if seed is None else seed)
    cone = antinorm.cone
    violations: list[str] = []

    interior = cone.sample_interior(rng, samples)
    boundary = cone.sample_boundary(rng, samples)
    outside = cone.sample_outside(rng, min(samples, 100))

    alpha_in = antinorm.values(interior)
    bad = int(np.sum(alpha_in <= 0))
    if bad:
        violations.append(f"(i) α <= 0 at {bad} relative-interior points")
    scale = np.maximum(1.0, np.linalg.norm(boundary, axis=1))
    alpha_rb = antinorm.values(boundary)
    bad = int(np.sum(np.abs(alpha_rb) > BOUNDARY_VALUE_TOL * scale))
    if bad:
        violations.append(f"(i) α != 0 at {bad} relative-boundary points (max {float(np.max(np.abs(alpha_rb))):.3e})")
    bad = sum(1 for u in outside if antinorm.eval(u) is not NEG_INF)
    if bad:
        violations.append(f"(i) α finite at {bad} points off the cone")
    positivity_ok = not violations

    lam = rng.uniform(1e-3, 10.0, size=samples)
    scaled = antinorm.values(interior * lam[:, None])
    homog_err = np.abs(scaled - lam * alpha_in) / (1.0 + lam * np.abs(alpha_in))
    max_homog = float(np.max(homog_err))
    homogeneity_ok = max_homog <= HOMOGENEITY_TOL
    if not homogeneity_ok:
        violations.append(f"(ii) homogeneity error {max_homog:.3e}")

    pool = np.vstack([interior, boundary])
    i = rng.integers(0, len(pool), size=samples)
    j = rng.integers(0, len(pool), size=samples)
    gap = antinorm.values(pool[i] + pool[j]) - antinorm.values(pool[i]) - antinorm.values(pool[j])
    min_gap = float(np.min(gap))
    superadditivity_ok = min_gap >= -SUPERADDITIVITY_TOL * float(np.max(np.linalg.norm(pool, axis=1)))
    if not superadditivity_ok:
        violations.append(f"(iii) superadditivity gap {min_gap:.3e}")

    dual_points = _dual_boundary_candidates(antinorm, rng, min(samples, MAX_DUAL_BOUNDARY_SAMPLES))
    dual_values = []
    for p in dual_points:
        try:
            res = antinorm.dual_value(p)
        except ConeLieError as exc:
            logger.warning("Dual evaluation failed at %s: %s", p.tolist(), exc)
            continue
        if is_finite(res.value):
            dual_values.append(abs(float(res.value)))
    max_dual = max(dual_values, default=0.0)

    report = AxiomReport(
        samples=samples,
        positivity_ok=positivity_ok,
        homogeneity_ok=homogeneity_ok,
        superadditivity_ok=superadditivity_ok,
        max_homogeneity_error=max_homog,
        min_superadditivity_gap=min_gap,
        violations=violations,
        dual_boundary_samples=len(dual_values),
        max_dual_on_boundary=max_dual,
        dual_is_antinorm=max_dual <= DUAL_BOUNDARY_TOL,
    )
    logger.info(
        "Axiom check for %s: axioms %s, max dual on rb %.3e",
        antinorm.kind,
        "hold" if report.axioms_hold else "fail",
        max_dual,
    )
    return report


def _dual_boundary_candidates(antinorm: Antinorm, rng: np.random.Generator, count: int) -> list[Vector]:
    """Unit covectors on rb(C∨) that do not annihilate C.

    Sectors and two-dimensional cones use the exact dual rays; other cones
    use the sampled boundary of the dual.
    """
    cone = antinorm.cone
    dual = cone.dual()
    points: list[Vector] = []
    if isinstance(cone, SectorCone) and not cone.free:
        points.extend(cone.dual_rays())
    elif cone.span_dim == 2 and not isinstance(cone, LorentzCone):
        ray_a, ray_b = cone.extreme_rays()
        points.extend(SectorCone(ray_a, ray_b).dual_rays())
    raw = dual.sample_boundary(rng, count)
    points.extend(unit(p) for p in raw)
    tol = antinorm.settings.annihilator_tol
    return [
        p
        for p in points
        if np.linalg.norm(p) > 0
        and not cone.annihilates(p, tol)
        and dual.classify_point(p, 1e-7) is PointClass.RELATIVE_BOUNDARY
    ]


def _boundary_search_points(antinorm: Antinorm, resolution: int) -> list[Vector]:
    """Parametrization of rb(C∨) per cone variant, annihilators excluded."""
    cone = antinorm.cone
    if isinstance(cone, SectorCone) and not cone.free:
        return list(cone.dual_rays())
    if isinstance(cone, LorentzCone):
        dual = cone.dual()
        r = len(cone.space_index)
        if r == 1:
            directions: NDArray[np.float64] = np.array([[-1.0], [1.0]])
        elif r == 2:
            theta = 2 * np.pi * np.arange(resolution) / resolution
            directions = np.column_stack([np.cos(theta), np.sin(theta)])
        else:
            rng = np.random.default_rng(antinorm.settings.random_seed)
            directions = rng.standard_normal((resolution, r))
            directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        pts = []
        for d in directions:
            p = np.zeros(cone.dim)
            p[list(cone.space_index)] = d * np.sqrt(dual.weights[1:]) ** -1
            p[cone.time_index] = dual.sign / np.sqrt(dual.weights[0])
            pts.append(unit(dual.nearest_boundary(p)))
        return pts
    if cone.span_dim == 2:
        ray_a, ray_b = cone.extreme_rays()
        return list(SectorCone(ray_a, ray_b).dual_rays())
    rng = np.random.default_rng(antinorm.settings.random_seed)
    return _dual_boundary_candidates(antinorm, rng, resolution)


def boundary_linearity(antinorm: Antinorm, search_resolution: int = 256) -> Vector | None:
    """Search rb(C∨) for p with α∨(p) > 0, p∨_1 non-empty and ri(p∨) ⊂ ri C.

    Returns:
        A witness covector scaled to unit sup-norm, or None
    """
    if search_resolution < 1:
        raise ValueError("search_resolution must be positive")
    cone = antinorm.cone
    tol = antinorm.settings.annihilator_tol
    for p in _boundary_search_points(antinorm, search_resolution):
        if cone.annihilates(p, tol):
            continue
        try:
            res = antinorm.dual_value(p)
        except ConeLieError as exc:
            logger.warning("Skipping boundary candidate %s: %s", p.tolist(), exc)
            continue
        if not is_finite(res.value) or float(res.value) <= DUAL_BOUNDARY_TOL or not res.attained:
            continue
        mset = maximizer_set(antinorm, p, 1.0)
        if len(mset.points) == 0:
            continue
        center = mset.points.mean(axis=0)
        if cone.classify_point(center, antinorm.settings.membership_tol) is not PointClass.RELATIVE_INTERIOR:
            continue
        witness = p / float(np.max(np.abs(p)))
        logger.info("Boundary linearity witness %s (α∨ = %.12g)", witness.tolist(), float(res.value))
        return witness
    return None


def additivity_defect(antinorm: Antinorm, p: Vector, rng: np.random.Generator, samples: int = 100) -> float | None:
    """Largest |α(s u + t v + w) - (s + t)| over the maximizer cone of p.

    u, v are two distinct points of p∨_1 and w a ray of p∨_0. Returns None
    when p∨_1 has fewer than two points.
    """
    ones = maximizer_set(antinorm, p, 1.0)
    if len(ones.points) < 2:
        return None
    zeros = maximizer_set(antinorm, p, 0.0)
    u, v = ones.points[0], ones.points[-1]
    w = zeros.points[0]
    s = rng.uniform(0, 2, size=samples)
    t = rng.uniform(0, 2, size=samples)
    c = rng.uniform(0, 1, size=samples)
    pts = s[:, None] * u + t[:, None] * v + c[:, None] * w
    return float(np.max(np.abs(antinorm.values(pts) - (s + t))))


def describe_dual(
    antinorm: Antinorm, p: Vector, r: float | None = None
) -> tuple[DualResultRecord, MaximizerSetRecord | None]:
    """α∨(p) and, when ``r`` is given and p is in the dual cone, the maximizer set p∨_r."""
    result = antinorm.dual_value(p)
    mset = None
    if r is not None and result.finite:
        mset = MaximizerSetRecord.of(maximizer_set(antinorm, p, r))
    return DualResultRecord.of(result), mset
