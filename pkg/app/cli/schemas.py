"""Run configuration document.

A run config is a TOML file::

    scenario = "heisenberg_harmonic"
    initial_covector = [0.0, -2.0, 1.0]
    nu = 1
    t1 = 3.0
    dt = 0.01
    formats = ["csv", "record", "svg"]

    [[sweep]]
    name = "mirror"
    initial_covector = [-2.0, 0.0, 1.0]

``scenario`` is either a registry name or an inline scenario table (see
:class:`~app.scenarios.schemas.ScenarioConfig`). Each ``[[sweep]]`` entry
overrides fields of the base run and is integrated independently.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, ValidationError, model_validator

from app.exceptions import ConfigError
from app.extremal.control import SelectionRule
from app.extremal.schemas import ControlLawSettings, ScheduleEntryConfig, TrajectorySummary
from app.scenarios.registry import validation_diagnostics
from app.scenarios.schemas import ScenarioConfig

OutputFormat = Literal["csv", "record", "svg"]


class SweepEntry(BaseModel):
    """Overrides for one run of a sweep."""

    name: str | None = None
    initial_covector: list[float] | None = Field(None, min_length=1)
    nu: Literal[0, 1] | None = None
    t1: float | None = Field(None, gt=0)
    dt: float | None = Field(None, gt=0)


class RunConfig(BaseModel):
    """One run, or a sweep of runs, of a scenario."""

    scenario: str | ScenarioConfig
    n: int | None = Field(None, ge=1, le=8, description="Space dimension for minkowski_1n")
    initial_covector: list[float] | None = Field(
        None, min_length=1, description="Defaults to the scenario's documented covector"
    )
    nu: Literal[0, 1] = 1
    t1: float = Field(..., gt=0)
    dt: float = Field(..., gt=0)
    selection_rule: SelectionRule = SelectionRule.CANONICAL
    schedule: list[ScheduleEntryConfig] = Field(default_factory=list)
    causal_tol: float | None = Field(None, gt=0)
    retract: bool = True
    output_path: str | None = Field(None, description="File stem; defaults to the scenario name")
    formats: list[OutputFormat] = Field(default_factory=lambda: ["csv"])
    projection: tuple[str, str] | None = Field(None, description="Chart coordinates for the SVG plot")
    sweep: list[SweepEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _dt_within_horizon(self) -> RunConfig:
        if self.dt > self.t1:
            raise ValueError("dt must lie in (0, t1]")
        for pos, entry in enumerate(self.sweep):
            t1 = entry.t1 if entry.t1 is not None else self.t1
            dt = entry.dt if entry.dt is not None else self.dt
            if dt > t1:
                raise ValueError(f"sweep entry {pos}: dt must lie in (0, t1]")
        return self

    @property
    def scenario_name(self) -> str:
        return self.scenario if isinstance(self.scenario, str) else self.scenario.name

    def control_settings(self, nu: int | None = None) -> ControlLawSettings:
        return ControlLawSettings(
            nu=self.nu if nu is None else nu,
            selection_rule=self.selection_rule,
            schedule=self.schedule,
            causal_tol=self.causal_tol,
            retract=self.retract,
        )

    def expand(self) -> list[RunConfig]:
        """The base run followed by one run per sweep entry."""
        runs = [self.model_copy(update={"sweep": []})]
        stem = self.output_path or self.scenario_name
        for pos, entry in enumerate(self.sweep):
            overrides = entry.model_dump(exclude={"name"}, exclude_none=True)
            overrides["output_path"] = f"{stem}-{entry.name or pos + 1}"
            overrides["sweep"] = []
            runs.append(self.model_copy(update=overrides))
        return runs


def parse_run_config(doc: dict, overrides: dict | None = None) -> RunConfig:
    """Validate a run document, applying command-line overrides first.

    Raises:
        ConfigError: With one dotted field path per schema violation
    """
    data = dict(doc)
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(validation_diagnostics(exc)) from exc


def load_document(path: str | Path) -> dict:
    """Read a TOML document.

    Raises:
        ConfigError: If the file is missing or not valid TOML
    """
    src = Path(path)
    try:
        with src.open("rb") as f:
            return tomllib.load(f)
    except OSError as exc:
        raise ConfigError([(str(src), f"cannot read: {exc.strerror or exc}")]) from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([(str(src), f"invalid TOML: {exc}")]) from exc


def load_run_config(path: str | Path, overrides: dict | None = None) -> RunConfig:
    return parse_run_config(load_document(path), overrides)


class RunOutcome(BaseModel):
    """Result of one run of a (possibly swept) run config."""

    name: str
    exit_code: int
    summary: TrajectorySummary | None = None
    files: list[str] = Field(default_factory=list)
    error: str | None = None
