"""Built-in problem instances and assembly of custom ones.

A scenario binds an algebra, a cone in it, an antinorm of that cone and a
group model. The five built-ins are fixed; custom scenarios come from a
:class:`~app.scenarios.schemas.ScenarioConfig` document and are checked
(salient cone, antinorm axioms) before use.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from pydantic import ValidationError

from app.antinorms.analysis import check_axioms
from app.antinorms.base import Antinorm
from app.antinorms.variants import HarmonicAntinorm, HybridAntinorm, QuadraticAntinorm
from app.cones.base import ConvexCone
from app.cones.lorentz import LorentzCone
from app.cones.schemas import ConeSummary
from app.cones.sector import SectorCone
from app.config import Settings
from app.exceptions import (
    AntinormAxiomError,
    ConfigError,
    ConstructionError,
    DimensionMismatchError,
    NonSalientConeError,
    UnknownScenarioError,
)
from app.extremal.control import ControlLawConfig
from app.extremal.integrator import integrate
from app.extremal.trajectory import Trajectory
from app.groups.models import AbelianGroup, ExpCoordinatesGroup, GroupModel, heisenberg_matrix_group
from app.lie.algebra import LieAlgebraSpec, free_carnot_r2s4, heisenberg
from app.lie.schemas import build_algebra
from app.scenarios.schemas import ExpectationRecord, ScenarioConfig, ScenarioSummary

logger = logging.getLogger(__name__)

SCENARIO_NAMES = (
    "minkowski_1n",
    "plane_hybrid",
    "heisenberg_harmonic",
    "heisenberg_quadratic",
    "carnot_r2s4",
)
MINKOWSKI_DEFAULT_N = 2
MINKOWSKI_MAX_N = 8
CONFIG_AXIOM_SAMPLES = 200


@dataclass(frozen=True)
class Scenario:
    """A fully specified problem instance.

    Attributes:
        name: Registry name, or the name given in a config document
        algebra: Structure constants
        cone: Control cone C
        antinorm: Antinorm of C
        group_model: Group used to reconstruct trajectories
        documented_expectations: (claim id, description) pairs the tests check
        description: One-line summary
        default_covector: Initial covector used when a run gives none
    """

    name: str
    algebra: LieAlgebraSpec
    cone: ConvexCone
    antinorm: Antinorm
    group_model: GroupModel
    documented_expectations: tuple[tuple[str, str], ...] = ()
    description: str = ""
    default_covector: tuple[float, ...] | None = field(default=None)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def lorentzian(self) -> bool:
        """span C is the whole algebra (otherwise the problem is sub-Lorentzian)."""
        return self.cone.span_dim == self.algebra.dim

    def integrate(self, h0: ArrayLike, cfg: ControlLawConfig, t1: float, dt: float) -> Trajectory:
        """Integrate the extremal through h0 with this scenario's data."""
        return integrate(self.algebra, self.antinorm, h0, cfg, t1, dt, self.group_model)

    def summary(self) -> ScenarioSummary:
        return ScenarioSummary(
            name=self.name,
            description=self.description,
            dim=self.dim,
            algebra_labels=list(self.algebra.basis_labels),
            nilpotency_step=self.algebra.nilpotency_step,
            cone=ConeSummary.of(self.cone),
            antinorm=self.antinorm.describe(),
            group_model=self.group_model.describe(),
            chart_labels=list(self.group_model.chart_labels),
            lorentzian=self.lorentzian,
            default_covector=None if self.default_covector is None else list(self.default_covector),
            expectations=[ExpectationRecord(claim=c, description=d) for c, d in self.documented_expectations],
        )


def available() -> list[str]:
    return list(SCENARIO_NAMES)


def _minkowski(n: int, settings: Settings | None) -> Scenario:
    if not 1 <= n <= MINKOWSKI_MAX_N:
        raise ConstructionError(f"minkowski_1n needs 1 <= n <= {MINKOWSKI_MAX_N}, got {n}")
    dim = n + 1
    algebra = LieAlgebraSpec.abelian(dim)
    cone = LorentzCone(dim, list(range(dim)))
    return Scenario(
        name="minkowski_1n",
        algebra=algebra,
        cone=cone,
        antinorm=QuadraticAntinorm(cone, settings),
        group_model=AbelianGroup(algebra),
        description=f"Minkowski space R^(1,{n}): future cone, Lorentzian length",
        default_covector=(-1.0,) + (0.0,) * n,
        documented_expectations=(
            ("conservation", "α∨(h) is constant along extremals and the causal tag never changes"),
            ("straight-lines", "h0 = (-1, 0, ..., 0) gives a time-like straight line with no switches"),
            ("lightlike-abnormal", "every ν = 0 extremal is light-like"),
        ),
    )


def _plane_hybrid(settings: Settings | None) -> Scenario:
    algebra = LieAlgebraSpec.abelian(2)
    cone = SectorCone([1.0, 1.0], [-1.0, 1.0])
    return Scenario(
        name="plane_hybrid",
        algebra=algebra,
        cone=cone,
        antinorm=HybridAntinorm(cone, settings),
        group_model=AbelianGroup(algebra),
        description="Plane sector with an antinorm linear on one side: the dual is not an antinorm",
        default_covector=(1.0, -1.0),
        documented_expectations=(
            ("boundary-linearity", "witness p = (1, -1) with α∨(p) = 1 on the boundary of the dual cone"),
            ("mixed-causality", "a normal extremal through the witness has both light-like and time-like arcs"),
        ),
    )


def _heisenberg_harmonic(settings: Settings | None) -> Scenario:
    algebra = heisenberg()
    cone = SectorCone([1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
    return Scenario(
        name="heisenberg_harmonic",
        algebra=algebra,
        cone=cone,
        antinorm=HarmonicAntinorm(cone, settings),
        group_model=heisenberg_matrix_group(algebra),
        description="Heisenberg group, quadrant of span{e1, e2}, harmonic antinorm u1 u2 / (u1 + u2)",
        default_covector=(0.0, -2.0, 1.0),
        documented_expectations=(
            ("dual-formula", "dual cone {h1 <= 0, h2 <= 0}, α∨(h) = (sqrt|h1| + sqrt|h2|)^2"),
            ("arc-sequence", "h0 = (0, -2, 1) gives light-like, time-like, light-like arcs"),
            ("switch-bound", "no extremal from the dual cone switches more than twice"),
        ),
    )


def _heisenberg_quadratic(settings: Settings | None) -> Scenario:
    algebra = heisenberg()
    cone = LorentzCone(3, [0, 1])
    return Scenario(
        name="heisenberg_quadratic",
        algebra=algebra,
        cone=cone,
        antinorm=QuadraticAntinorm(cone, settings),
        group_model=ExpCoordinatesGroup(algebra),
        description="Sub-Lorentzian Heisenberg group: cone u1 >= |u2| in span{e1, e2}, quadratic antinorm",
        default_covector=(-1.25, 0.75, 0.5),
        documented_expectations=(
            ("conservation", "α∨(h) is constant along extremals and the causal tag never changes"),
            ("energy-flow", "time-like extremals coincide with the energy flow on H = -1/2"),
            ("contact", "span C is a contact distribution; abnormal extremals never annihilate C"),
        ),
    )


def _carnot_r2s4(settings: Settings | None) -> Scenario:
    algebra = free_carnot_r2s4()
    cone = LorentzCone(8, [0, 1])
    return Scenario(
        name="carnot_r2s4",
        algebra=algebra,
        cone=cone,
        antinorm=QuadraticAntinorm(cone, settings),
        group_model=ExpCoordinatesGroup(algebra),
        description="Free Carnot group of rank 2 and step 4, cone u1 >= |u2| in span{X1, X2}",
        default_covector=(-1.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
        documented_expectations=(
            ("corners", "controls (1, 1) then (1, -1) switching at t = 1 give a corner, matched in all 8 coordinates"),
            ("not-strictly-abnormal", "the corner is both a ν = 1 and a ν = 0 extremal"),
            ("conjugate-system", "h6, h7, h8 are constant along every extremal"),
        ),
    )


def builtin(name: str, n: int | None = None, settings: Settings | None = None) -> Scenario:
    """Look up a built-in scenario.

    Args:
        name: One of :data:`SCENARIO_NAMES`
        n: Space dimension for ``minkowski_1n`` (default 2, at most 8); ignored otherwise
        settings: Numeric settings passed to the antinorm

    Returns:
        The scenario

    Raises:
        UnknownScenarioError: If the name is not registered
    """
    if name == "minkowski_1n":
        return _minkowski(MINKOWSKI_DEFAULT_N if n is None else n, settings)
    if name == "plane_hybrid":
        return _plane_hybrid(settings)
    if name == "heisenberg_harmonic":
        return _heisenberg_harmonic(settings)
    if name == "heisenberg_quadratic":
        return _heisenberg_quadratic(settings)
    if name == "carnot_r2s4":
        return _carnot_r2s4(settings)
    raise UnknownScenarioError(name, SCENARIO_NAMES)


def validation_diagnostics(exc: ValidationError, prefix: str = "") -> list[tuple[str, str]]:
    """Turn pydantic errors into (dotted path, message) pairs."""
    out = []
    for err in exc.errors():
        path = ".".join(str(part) for part in err["loc"])
        if prefix:
            path = f"{prefix}.{path}" if path else prefix
        out.append((path or "<root>", err["msg"]))
    return out


def assemble(config: ScenarioConfig, settings: Settings | None = None, check: bool = True) -> Scenario:
    """Build a scenario from a validated config document.

    Raises:
        ConfigError: If a component cannot be built from its section
        NonSalientConeError: If the cone contains a line
        AntinormAxiomError: If the antinorm fails the axioms of its cone
    """
    try:
        algebra = build_algebra(config.algebra)
    except (ConstructionError, ValueError) as exc:
        raise ConfigError([("algebra", str(exc))]) from exc
    try:
        cone = config.cone.build(algebra.dim)
    except (DimensionMismatchError, ConstructionError, ValueError) as exc:
        raise ConfigError([("cone", str(exc))]) from exc
    if not cone.is_salient():
        raise NonSalientConeError(f"cone {cone.describe()} contains a line")
    try:
        antinorm = config.antinorm.build(cone, settings)
    except ConstructionError as exc:
        raise ConfigError([("antinorm", str(exc))]) from exc
    group_config = config.group
    try:
        if group_config is None:
            group_model: GroupModel = (
                AbelianGroup(algebra) if not np.any(algebra.structure_constants) else ExpCoordinatesGroup(algebra)
            )
        else:
            group_model = group_config.build(algebra)
    except ConstructionError as exc:
        raise ConfigError([("group", str(exc))]) from exc
    if config.default_covector is not None and len(config.default_covector) != algebra.dim:
        raise ConfigError([("default_covector", f"expected {algebra.dim} entries, got {len(config.default_covector)}")])

    if check:
        report = check_axioms(antinorm, samples=CONFIG_AXIOM_SAMPLES)
        if not report.axioms_hold:
            raise AntinormAxiomError(report.violations)

    logger.info("Assembled scenario %s (dim %d, %s)", config.name, algebra.dim, antinorm.describe())
    return Scenario(
        name=config.name,
        algebra=algebra,
        cone=cone,
        antinorm=antinorm,
        group_model=group_model,
        description=config.description,
        default_covector=None if config.default_covector is None else tuple(config.default_covector),
    )


def from_config(doc: Mapping[str, Any] | ScenarioConfig, settings: Settings | None = None) -> Scenario:
    """Validate a scenario document and assemble it.

    Raises:
        ConfigError: On schema violations, with dotted field paths
        NonSalientConeError: If the cone contains a line
        AntinormAxiomError: If the antinorm fails the axioms of its cone
    """
    if isinstance(doc, ScenarioConfig):
        config = doc
    else:
        try:
            config = ScenarioConfig.model_validate(doc)
        except ValidationError as exc:
            raise ConfigError(validation_diagnostics(exc)) from exc
    return assemble(config, settings)
