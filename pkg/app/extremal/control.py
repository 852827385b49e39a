"""Pontryagin control law: the maximizing control for a covector.

For ν = 1 the Hamiltonian is H(h, u) = <h, u> + α(u); for ν = 0 it is
<h, u>. Writing u = μ ū with ū on the unit antisphere, maximization over
μ > 0 leaves two branches: time-like controls on S∨_1 = {α∨ = 1} and
light-like controls on the relative boundary of the dual cone.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike

from app.antinorms.base import Antinorm, DualFunctionResult, is_finite
from app.antinorms.oracle import canonical_maximizer
from app.cones.base import PointClass, Vector, unit
from app.exceptions import ConfigError, NoMaximumError

logger = logging.getLogger(__name__)


class CausalType(str, Enum):
    TIME_LIKE = "TimeLike"
    LIGHT_LIKE = "LightLike"
    SUB_RIEMANNIAN_ABNORMAL = "SubRiemannianAbnormal"


class SelectionRule(str, Enum):
    """How a control is picked when the maximizer is not forced."""

    CANONICAL = "Canonical"
    SCHEDULED = "Scheduled"


@dataclass(frozen=True)
class ScheduleEntry:
    """Control used verbatim on the half-open interval [start, end)."""

    start: float
    end: float
    control: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "control", np.asarray(self.control, dtype=float))


@dataclass(frozen=True)
class ControlLawConfig:
    """Multiplier, selection rule and tolerances of the control law.

    Attributes:
        nu: Multiplier of the antinorm in the Hamiltonian (0 or 1)
        selection_rule: Canonical or Scheduled
        schedule: Ordered, disjoint intervals with their controls
        causal_tol: Tolerance on α∨ for the branch tests; None uses the settings
        retract: Keep time-like covectors on S∨_1 after every sub-step
    """

    nu: int = 1
    selection_rule: SelectionRule = SelectionRule.CANONICAL
    schedule: tuple[ScheduleEntry, ...] = field(default=())
    causal_tol: float | None = None
    retract: bool = True

    def __post_init__(self) -> None:
        problems = []
        if self.nu not in (0, 1):
            problems.append(("nu", "must be 0 or 1"))
        if self.causal_tol is not None and self.causal_tol <= 0:
            problems.append(("causal_tol", "must be positive"))
        if self.selection_rule is SelectionRule.SCHEDULED and not self.schedule:
            problems.append(("schedule", "a Scheduled rule needs at least one interval"))
        previous_end = -np.inf
        for pos, entry in enumerate(self.schedule):
            if not entry.end > entry.start:
                problems.append((f"schedule.{pos}", "interval end must exceed its start"))
            if entry.start < previous_end:
                problems.append((f"schedule.{pos}", "intervals must be ordered and disjoint"))
            previous_end = entry.end
        if problems:
            raise ConfigError(problems)

    def scheduled_entry(self, t: float) -> ScheduleEntry | None:
        """Interval entry covering t; the last interval is closed on the right."""
        if self.selection_rule is not SelectionRule.SCHEDULED:
            return None
        for entry in self.schedule:
            if entry.start <= t < entry.end:
                return entry
        last = self.schedule[-1]
        if t == last.end:
            return last
        return None

    def breakpoints(self) -> list[float]:
        if self.selection_rule is not SelectionRule.SCHEDULED:
            return []
        points = {e.start for e in self.schedule} | {e.end for e in self.schedule}
        return sorted(points)


@dataclass(frozen=True)
class Control:
    """Result of the control law at one covector."""

    u: Vector
    causal: CausalType
    dual_value: float


def tolerance(antinorm: Antinorm, cfg: ControlLawConfig) -> float:
    return antinorm.settings.causal_tol if cfg.causal_tol is None else cfg.causal_tol


def lightlike_ray(antinorm: Antinorm, h: Vector) -> Vector | None:
    """Lexicographically smallest unit ray of C ∩ ker h, or None."""
    face = antinorm.cone.exposed_face(h)
    if face.whole_cone or not face.rays:
        return None
    rays = np.array(face.rays)
    return unit(rays[np.lexsort(rays.T[::-1])[0]])


def classify_covector(
    antinorm: Antinorm,
    h: ArrayLike,
    cfg: ControlLawConfig,
) -> tuple[CausalType, DualFunctionResult]:
    """Branch of the control law at h without choosing the control.

    Raises:
        NoMaximumError: If no admissible control maximizes the Hamiltonian
    """
    cone = antinorm.cone
    hh = cone.check_vector(h, "covector")
    settings = antinorm.settings
    tol = tolerance(antinorm, cfg)
    position = cone.dual().classify_point(hh, settings.membership_tol)
    if position is PointClass.OUTSIDE:
        raise NoMaximumError(hh, cfg.nu, "h is outside the dual cone, so H grows without bound along C")
    annihilates = cone.annihilates(hh, settings.annihilator_tol)
    result = antinorm.dual_value(hh)
    value = float(result.value) if is_finite(result.value) else float("-inf")

    if cfg.nu == 0:
        if annihilates:
            return CausalType.SUB_RIEMANNIAN_ABNORMAL, result
        if position is PointClass.RELATIVE_BOUNDARY:
            return CausalType.LIGHT_LIKE, result
        raise NoMaximumError(hh, 0, "h is inside the dual cone, so <h, u> < 0 for every nonzero control")

    if annihilates:
        raise NoMaximumError(hh, 1, "h annihilates C, so H = α(u) grows without bound")
    if abs(value - 1.0) <= tol and result.attained:
        return CausalType.TIME_LIKE, result
    if position is PointClass.RELATIVE_BOUNDARY and (value <= tol or value >= 1.0 - tol):
        return CausalType.LIGHT_LIKE, result
    raise NoMaximumError(
        hh,
        1,
        f"α∨(h) = {value:.6g} is neither 1 on an attained branch nor admissible on the boundary",
    )


def control_law(antinorm: Antinorm, h: ArrayLike, cfg: ControlLawConfig) -> Control:
    """Maximizing control at h.

    Time-like controls are normalized to α(u) = 1; light-like and abnormal
    controls to unit Euclidean norm. Non-unique maximizers are resolved to
    the lexicographically smallest one.

    Raises:
        NoMaximumError: If no extremal passes through h
    """
    hh = antinorm.cone.check_vector(h, "covector")
    causal, result = classify_covector(antinorm, hh, cfg)
    value = result.as_float()
    if causal is CausalType.TIME_LIKE:
        u = canonical_maximizer(antinorm, hh, result)
        if u is None:
            raise NoMaximumError(hh, cfg.nu, "the supremum on the unit antisphere is not attained")
        return Control(np.asarray(u, dtype=float), causal, value)
    if causal is CausalType.SUB_RIEMANNIAN_ABNORMAL:
        return Control(unit(antinorm.cone.interior_point()), causal, value)
    ray = lightlike_ray(antinorm, hh)
    if ray is None:
        raise NoMaximumError(hh, cfg.nu, "C ∩ ker h contains no nonzero control")
    return Control(ray, causal, value)


def control_causal_type(antinorm: Antinorm, u: ArrayLike, nu: int) -> CausalType:
    """Causal type of a prescribed control by its position in C.

    Raises:
        ConfigError: If u is zero or outside the cone
    """
    uu = antinorm.cone.check_vector(u, "control")
    position = antinorm.cone.classify_point(uu, antinorm.settings.membership_tol)
    if position is PointClass.OUTSIDE or not np.any(uu):
        raise ConfigError([("schedule", f"control {uu.tolist()} is not in C \\ 0")])
    if position is PointClass.RELATIVE_BOUNDARY:
        return CausalType.LIGHT_LIKE
    return CausalType.TIME_LIKE if nu == 1 else CausalType.SUB_RIEMANNIAN_ABNORMAL


def hamiltonian(antinorm: Antinorm, h: Vector, u: Vector, nu: int) -> float:
    """<h, u> + ν α(u) for u in C."""
    value = float(np.dot(h, u))
    if nu:
        value += float(antinorm.values(u[None, :])[0])
    return value
