"""Numeric dual-function oracle and maximizer sets.

α∨(p) = -sup_u <p, u> / α(u) over the relative interior of C. The ratio is
maximized over a compact cross-section of the cone: a segment between the
two extreme rays for cones with two-dimensional span, a ball for Lorentz
cones, and the convex hull of the generators for polyhedral cones. A coarse
grid is refined locally; a failed certificate raises NonConvergenceError and
tenacity retries with a four times finer grid.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize, minimize_scalar
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from app.antinorms.base import DualFunctionResult, DualMethod, is_finite
from app.cones.base import ConvexCone, PointClass, Vector
from app.cones.lorentz import LorentzCone
from app.cones.polyhedral import PolyhedralCone
from app.exceptions import EmptyDomainError, NonConvergenceError, UnsupportedOperationError

if TYPE_CHECKING:
    from app.antinorms.base import Antinorm

logger = logging.getLogger(__name__)

MAX_CLOUD_POINTS = 64
ENDPOINT_PROBES = tuple(10.0 ** -k for k in range(4, 16))


class Section(ABC):
    """Compact cross-section of a cone, parametrized by a box or simplex."""

    @abstractmethod
    def grid(self, resolution: int) -> NDArray[np.float64]:
        """Parameter samples, one per row."""

    @abstractmethod
    def points(self, params: NDArray[np.float64]) -> NDArray[np.float64]:
        """Cone points for parameter rows."""

    @abstractmethod
    def refine(self, objective, start: NDArray[np.float64], resolution: int, tol: float) -> NDArray[np.float64]:
        """Local maximization of ``objective`` starting from ``start``."""

    @abstractmethod
    def on_edge(self, param: NDArray[np.float64], resolution: int) -> bool:
        """Whether a parameter lies at the relative boundary of the section."""


class SegmentSection(Section):
    """u(s) = (1 - s) r_a + s r_b for s in (0, 1)."""

    def __init__(self, ray_a: Vector, ray_b: Vector) -> None:
        self.ray_a = ray_a
        self.ray_b = ray_b

    def grid(self, resolution: int) -> NDArray[np.float64]:
        return ((np.arange(resolution) + 0.5) / resolution)[:, None]

    def points(self, params: NDArray[np.float64]) -> NDArray[np.float64]:
        s = params[:, :1]
        return (1.0 - s) * self.ray_a + s * self.ray_b

    def refine(self, objective, start, resolution, tol):
        s0 = float(start[0])
        lo, hi = max(s0 - 1.0 / resolution, 0.0), min(s0 + 1.0 / resolution, 1.0)
        res = minimize_scalar(
            lambda s: -objective(np.array([[s]]))[0],
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": tol},
        )
        return np.array([float(res.x)])

    def on_edge(self, param, resolution):
        s = float(param[0])
        return s <= 1.0 / resolution or s >= 1.0 - 1.0 / resolution

    def endpoint_params(self, param: NDArray[np.float64]) -> list[NDArray[np.float64]]:
        """Parameters approaching the nearer endpoint geometrically."""
        near_zero = float(param[0]) < 0.5
        return [np.array([d if near_zero else 1.0 - d]) for d in ENDPOINT_PROBES]


class BallSection(Section):
    """Cross-section {sqrt(c0) sign u0 = 1} of a Lorentz cone, |z| <= 1."""

    def __init__(self, cone: LorentzCone, seed: int) -> None:
        self.cone = cone
        self.rank = len(cone.space_index)
        self.seed = seed

    def grid(self, resolution: int) -> NDArray[np.float64]:
        if self.rank == 2:
            n = max(int(np.sqrt(resolution)), 8)
            rho = (np.arange(n) + 0.5) / n
            theta = 2 * np.pi * np.arange(n) / n
            rr, tt = np.meshgrid(rho, theta)
            return np.column_stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()])
        rng = np.random.default_rng(self.seed)
        z = rng.standard_normal((resolution, self.rank))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        return z * rng.uniform(0, 1, size=(resolution, 1)) ** (1.0 / self.rank)

    def points(self, params):
        sign = self.cone.sign / np.sqrt(self.cone.weights[0])
        out = np.zeros((params.shape[0], self.cone.dim))
        out[:, self.cone.time_index] = sign
        out[:, list(self.cone.space_index)] = params / np.sqrt(self.cone.weights[1:])
        return out

    def refine(self, objective, start, resolution, tol):
        # open ball <- R^r
        def to_ball(y):
            return y / np.sqrt(1.0 + np.dot(y, y))

        r2 = min(float(np.dot(start, start)), 1.0 - 1e-12)
        y0 = start / np.sqrt(1.0 - r2)
        res = minimize(
            lambda y: -objective(to_ball(y)[None, :])[0],
            y0,
            method="Nelder-Mead",
            options={"xatol": tol, "fatol": tol * 1e-2, "maxiter": 20000},
        )
        return to_ball(res.x)

    def on_edge(self, param, resolution):
        return float(np.linalg.norm(param)) >= 1.0 - 1e-6


class SimplexSection(Section):
    """Convex hull of the unit generators of a polyhedral cone."""

    def __init__(self, cone: PolyhedralCone, seed: int) -> None:
        self.generators = cone.generators
        self.seed = seed

    def grid(self, resolution: int) -> NDArray[np.float64]:
        rng = np.random.default_rng(self.seed)
        return rng.dirichlet(np.ones(self.generators.shape[0]), size=resolution)

    def points(self, params):
        return params @ self.generators

    def refine(self, objective, start, resolution, tol):
        def weights(y):
            e = np.exp(y - np.max(y))
            return e / e.sum()

        y0 = np.log(np.maximum(start, 1e-12))
        res = minimize(
            lambda y: -objective(weights(y)[None, :])[0],
            y0,
            method="Nelder-Mead",
            options={"xatol": tol, "fatol": tol * 1e-2, "maxiter": 20000},
        )
        return weights(res.x)

    def on_edge(self, param, resolution):
        return float(np.min(param)) <= 1e-9


def section_for(cone: ConvexCone, seed: int) -> Section:
    """Cross-section used by the oracle for ``cone``.

    Raises:
        UnsupportedOperationError: For cones without a known parametrization
    """
    if cone.span_dim == 2 and cone.is_salient():
        ray_a, ray_b = cone.extreme_rays()
        return SegmentSection(ray_a, ray_b)
    if isinstance(cone, LorentzCone) and cone.is_salient():
        return BallSection(cone, seed)
    if isinstance(cone, PolyhedralCone):
        return SimplexSection(cone, seed)
    raise UnsupportedOperationError(f"no cross-section for {cone.describe()}")


@dataclass
class _Solution:
    value: float
    maximizer: Vector | None
    attained: bool
    cloud: NDArray[np.float64] = field(default_factory=lambda: np.zeros((0, 0)))
    cloud_params: NDArray[np.float64] = field(default_factory=lambda: np.zeros((0, 0)))
    unbounded: bool = False


def _ratio(antinorm: Antinorm, section: Section, p: Vector):
    def objective(params: NDArray[np.float64]) -> NDArray[np.float64]:
        pts = section.points(np.atleast_2d(params))
        alpha = antinorm.values(pts)
        num = pts @ p
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(alpha > 1e-300, num / np.where(alpha > 1e-300, alpha, 1.0), -np.inf)
        return np.where(np.isfinite(out), out, -np.inf)

    return objective


def _solve(antinorm: Antinorm, p: Vector, resolution: int) -> _Solution:
    settings = antinorm.settings
    section = section_for(antinorm.cone, settings.random_seed)
    objective = _ratio(antinorm, section, p)
    params = section.grid(resolution)
    values = objective(params)
    k = int(np.argmax(values))
    grid_best = float(values[k])
    if not np.isfinite(grid_best):
        raise NonConvergenceError(float("-inf"), "no finite ratio on the grid")

    refined = section.refine(objective, params[k], resolution, settings.dual_refine_tol)
    best = float(objective(refined[None, :])[0])
    if not np.isfinite(best) or best < grid_best:
        refined, best = params[k], grid_best

    tol = settings.maximizer_tol * max(1.0, abs(best))
    cloud_params = params[values >= best - tol]
    edge = [section.on_edge(c, resolution) for c in cloud_params]
    attained = not all(edge)

    unbounded = False
    if isinstance(section, SegmentSection):
        if attained:
            unbounded = any(edge)
            # the refined point must be a local maximum at sub-grid scale
            s = float(refined[0])
            delta = 0.1 / resolution
            around = objective(np.array([[max(s - delta, 0.0)], [min(s + delta, 1.0)]]))
            if np.max(around) > best + tol:
                raise NonConvergenceError(-best, f"refinement is not a local maximum at resolution {resolution}")
        else:
            # supremum approached at a boundary ray: take the limit along it
            probes = section.endpoint_params(refined)
            probe_values = objective(np.array(probes))
            j = int(np.argmax(probe_values))
            if probe_values[j] > best:
                best, refined = float(probe_values[j]), probes[j]

    u = section.points(refined[None, :])[0]
    alpha_u = float(antinorm.values(u[None, :])[0])
    if attained and isinstance(section, (BallSection, SimplexSection)):
        attained = alpha_u > 1e-6 * float(np.linalg.norm(u))
    maximizer = u / alpha_u if attained and alpha_u > 0 else None
    cloud_pts = section.points(cloud_params) if len(cloud_params) else np.zeros((0, antinorm.dim))
    return _Solution(-best, maximizer, attained, cloud_pts, cloud_params, unbounded)


def _solve_with_escalation(antinorm: Antinorm, p: Vector) -> _Solution:
    settings = antinorm.settings
    retrying = Retrying(
        stop=stop_after_attempt(settings.dual_oracle_attempts),
        retry=retry_if_exception_type(NonConvergenceError),
        reraise=True,
    )
    for attempt in retrying:
        with attempt:
            level = attempt.retry_state.attempt_number - 1
            resolution = settings.dual_grid_resolution * 4**level
            if level:
                logger.info("Dual oracle escalating to resolution %d for p=%s", resolution, p.tolist())
            return _solve(antinorm, p, resolution)
    raise AssertionError("unreachable")


def numeric_dual(antinorm: Antinorm, p: Vector) -> DualFunctionResult:
    """α∨(p) by grid search plus local refinement.

    Raises:
        NonConvergenceError: When every escalation level fails its certificate
    """
    sol = _solve_with_escalation(antinorm, p)
    unique = True
    if sol.attained and len(sol.cloud_params) > 1:
        unique = _cloud_is_point(sol.cloud_params, antinorm.settings.dual_grid_resolution)
    return DualFunctionResult(sol.value, sol.maximizer, DualMethod.NUMERIC, attained=sol.attained, unique=unique)


def _cloud_is_point(params: NDArray[np.float64], resolution: int) -> bool:
    spread = float(np.max(np.ptp(params, axis=0)))
    return spread <= 4.0 / resolution


# ---------------------------------------------------------------------------
# Maximizer sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MaximizerSet:
    """Sampled description of p∨_r = argmax over S_r of <p, u>.

    Attributes:
        r: Antisphere level
        points: Maximizers (rays for r = 0), one per row
        unique: Whether the set is a single point (or a single ray for r = 0)
        shape: "empty", "point", "segment", "patch", "ray" or "cone"
        unbounded: Whether the set extends to infinity along the cone boundary
        convex: Midpoints of sampled maximizers are maximizers
    """

    r: float
    points: NDArray[np.float64]
    unique: bool
    shape: Literal["empty", "point", "segment", "patch", "ray", "cone"]
    unbounded: bool = False
    convex: bool = True


def _affine_shape(points: NDArray[np.float64]) -> Literal["point", "segment", "patch"]:
    if len(points) < 2:
        return "point"
    rank = np.linalg.matrix_rank(points - points[0], tol=1e-6 * max(1.0, float(np.max(np.abs(points)))))
    return "point" if rank == 0 else "segment" if rank == 1 else "patch"


def _thin(points: NDArray[np.float64], limit: int = MAX_CLOUD_POINTS) -> NDArray[np.float64]:
    if len(points) <= limit:
        return points
    idx = np.linspace(0, len(points) - 1, limit).round().astype(int)
    return points[idx]


def maximizer_set(antinorm: Antinorm, p: ArrayLike, r: float = 1.0, tol: float | None = None) -> MaximizerSet:
    """Describe p∨_r for p in the dual cone.

    Raises:
        EmptyDomainError: If p is outside the dual cone
        ValueError: If r is negative
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    cone = antinorm.cone
    pp = cone.check_vector(p, "covector")
    tol = antinorm.settings.maximizer_tol if tol is None else tol
    if cone.dual().classify_point(pp, antinorm.settings.membership_tol) is PointClass.OUTSIDE:
        raise EmptyDomainError(pp)

    if r == 0:
        face = cone.exposed_face(pp)
        if face.whole_cone:
            try:
                rays = cone.extreme_rays()
            except UnsupportedOperationError:
                rays = [cone.interior_point()]
            return MaximizerSet(0.0, np.array(rays), unique=False, shape="cone")
        if not face.rays:
            return MaximizerSet(0.0, np.zeros((1, cone.dim)), unique=True, shape="point")
        rays = np.array(face.rays)
        return MaximizerSet(0.0, rays, unique=len(rays) == 1, shape="ray" if len(rays) == 1 else "cone")

    result = antinorm.dual_value(pp)
    if not is_finite(result.value) or not result.attained or result.maximizer is None:
        return MaximizerSet(r, np.zeros((0, cone.dim)), unique=False, shape="empty")
    if result.unique and result.method is DualMethod.CLOSED_FORM:
        return MaximizerSet(r, r * result.maximizer[None, :], unique=True, shape="point")

    sol = _solve_with_escalation(antinorm, pp)
    cloud = sol.cloud[antinorm.values(sol.cloud) > 0] if len(sol.cloud) else sol.cloud
    if len(cloud) == 0:
        cloud = result.maximizer[None, :]
    normalized = cloud / antinorm.values(cloud)[:, None]
    if result.method is DualMethod.CLOSED_FORM:
        normalized = np.vstack([result.maximizer[None, :], normalized])
    normalized = _thin(normalized)
    unique = bool(result.unique and _affine_shape(normalized) == "point")
    points = r * (normalized[:1] if unique else normalized)
    convex = _midpoints_are_maximizers(antinorm, pp, points, r, float(result.value), tol)
    shape = "point" if unique else _affine_shape(points)
    return MaximizerSet(r, points, unique=unique, shape=shape, unbounded=sol.unbounded and not unique, convex=convex)


def _midpoints_are_maximizers(
    antinorm: Antinorm,
    p: Vector,
    points: NDArray[np.float64],
    r: float,
    dual: float,
    tol: float,
) -> bool:
    if len(points) < 2:
        return True
    sample = _thin(points, 16)
    i, j = np.triu_indices(len(sample), k=1)
    mids = 0.5 * (sample[i] + sample[j])
    scale = np.maximum(1.0, np.linalg.norm(mids, axis=1))
    level_ok = np.abs(antinorm.values(mids) - r) <= tol * scale
    value_ok = np.abs(mids @ p + r * dual) <= tol * scale
    return bool(np.all(level_ok & value_ok))


def canonical_maximizer(antinorm: Antinorm, p: ArrayLike, result: DualFunctionResult) -> Vector | None:
    """Lexicographically smallest maximizer on S_1, or the unique one."""
    if result.maximizer is None:
        return None
    if result.unique:
        return result.maximizer
    candidates = maximizer_set(antinorm, p, 1.0).points
    if len(candidates) == 0:
        return result.maximizer
    order = np.lexsort(candidates.T[::-1])
    return candidates[order[0]]
