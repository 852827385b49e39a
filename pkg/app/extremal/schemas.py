"""Pydantic schemas for control-law configuration, trajectory records and reports."""

from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.extremal.control import CausalType, ControlLawConfig, ScheduleEntry, SelectionRule
from app.extremal.trajectory import ExtremalState, Switch, Trajectory


class ScheduleEntryConfig(BaseModel):
    """Control used verbatim on [start, end)."""

    start: float = Field(..., ge=0)
    end: float
    control: list[float] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _ordered(self) -> "ScheduleEntryConfig":
        if self.end <= self.start:
            raise ValueError("end must exceed start")
        return self


class ControlLawSettings(BaseModel):
    """Wire form of :class:`ControlLawConfig`."""

    nu: Literal[0, 1] = 1
    selection_rule: SelectionRule = SelectionRule.CANONICAL
    schedule: list[ScheduleEntryConfig] = Field(default_factory=list)
    causal_tol: float | None = Field(None, gt=0)
    retract: bool = True

    @model_validator(mode="after")
    def _schedule_consistent(self) -> "ControlLawSettings":
        if self.selection_rule is SelectionRule.SCHEDULED and not self.schedule:
            raise ValueError("a Scheduled rule needs a schedule")
        for pos, (a, b) in enumerate(zip(self.schedule, self.schedule[1:])):
            if b.start < a.end:
                raise ValueError(f"schedule entries {pos} and {pos + 1} overlap or are out of order")
        return self

    def to_config(self) -> ControlLawConfig:
        return ControlLawConfig(
            nu=self.nu,
            selection_rule=self.selection_rule,
            schedule=tuple(ScheduleEntry(e.start, e.end, np.asarray(e.control)) for e in self.schedule),
            causal_tol=self.causal_tol,
            retract=self.retract,
        )


class SampleRecord(BaseModel):
    t: float
    h: list[float]
    u: list[float]
    g: list[float]
    alpha_dual: float | Literal["-inf"]
    causal: CausalType

    @classmethod
    def of(cls, state: ExtremalState) -> "SampleRecord":
        return cls(
            t=state.t,
            h=state.h.tolist(),
            u=state.u.tolist(),
            g=np.asarray(state.g).tolist(),
            alpha_dual="-inf" if state.dual_value == float("-inf") else state.dual_value,
            causal=state.causal,
        )

    def to_state(self) -> ExtremalState:
        return ExtremalState(
            t=self.t,
            g=np.asarray(self.g, dtype=float),
            h=np.asarray(self.h, dtype=float),
            u=np.asarray(self.u, dtype=float),
            causal=self.causal,
            dual_value=float("-inf") if self.alpha_dual == "-inf" else float(self.alpha_dual),
        )


class SwitchRecord(BaseModel):
    time: float
    from_causal: CausalType
    to_causal: CausalType


class TrajectoryRecord(BaseModel):
    """Structured mirror of the trajectory CSV."""

    scenario: str | None = None
    nu: int
    dt: float
    chart_labels: list[str]
    samples: list[SampleRecord]
    switches: list[SwitchRecord] = Field(default_factory=list)
    conserved_report: dict[str, float] = Field(default_factory=dict)
    diagnostics: list[str] = Field(default_factory=list)
    truncated: bool = False

    @classmethod
    def of(cls, traj: Trajectory, scenario: str | None = None) -> "TrajectoryRecord":
        return cls(
            scenario=scenario,
            nu=traj.nu,
            dt=traj.dt,
            chart_labels=list(traj.chart_labels),
            samples=[SampleRecord.of(s) for s in traj.samples],
            switches=[SwitchRecord(time=s.time, from_causal=s.from_causal, to_causal=s.to_causal) for s in traj.switches],
            conserved_report=traj.conserved_report,
            diagnostics=traj.diagnostics,
            truncated=traj.truncated,
        )

    def to_trajectory(self) -> Trajectory:
        return Trajectory(
            samples=[s.to_state() for s in self.samples],
            dt=self.dt,
            nu=self.nu,
            switches=[Switch(s.time, s.from_causal, s.to_causal) for s in self.switches],
            conserved_report=dict(self.conserved_report),
            diagnostics=list(self.diagnostics),
            truncated=self.truncated,
            chart_labels=tuple(self.chart_labels),
        )


class TrajectorySummary(BaseModel):
    """What ``run`` prints and returns."""

    scenario: str | None = None
    samples: int
    t_end: float
    arcs: list[CausalType]
    switches: list[SwitchRecord]
    max_hamiltonian: float
    max_dual_drift: float
    truncated: bool
    diagnostics: list[str] = Field(default_factory=list)

    @classmethod
    def of(cls, traj: Trajectory, scenario: str | None = None) -> "TrajectorySummary":
        return cls(
            scenario=scenario,
            samples=len(traj),
            t_end=traj.samples[-1].t,
            arcs=traj.arcs(),
            switches=[SwitchRecord(time=s.time, from_causal=s.from_causal, to_causal=s.to_causal) for s in traj.switches],
            max_hamiltonian=traj.conserved_report.get("hamiltonian", 0.0),
            max_dual_drift=traj.conserved_report.get("dual_value", 0.0),
            truncated=traj.truncated,
            diagnostics=traj.diagnostics,
        )


class AbnormalReport(BaseModel):
    """Verdicts on a candidate abnormal (ν = 0) extremal."""

    samples: int
    boundary_ok: bool = Field(description="h(t) stays on the relative boundary of the dual cone")
    hamiltonian_ok: bool = Field(description="<h(t), u(t)> vanishes at every sample")
    max_hamiltonian: float
    lightlike_samples: int
    annihilator_samples: int
    lorentzian: bool = Field(description="span C is the whole algebra")
    contact: bool | None = Field(None, description="Contact test of span C; None unless the algebra is 3-dimensional")
    all_lightlike_ok: bool | None = Field(None, description="Every sample light-like (checked when lorentzian)")
    no_annihilator_ok: bool | None = Field(None, description="No annihilator samples (checked for contact distributions)")
    is_abnormal_extremal: bool


class RunRequest(BaseModel):
    """Integrate an extremal of a registered scenario."""

    scenario: str
    initial_covector: list[float] = Field(..., min_length=1)
    n: int | None = Field(None, ge=1, le=8)
    t1: float = Field(..., gt=0)
    dt: float = Field(..., gt=0)
    control: ControlLawSettings = Field(default_factory=ControlLawSettings)
    include_samples: bool = False

    @field_validator("dt")
    @classmethod
    def _dt_finite(cls, value: float) -> float:
        if not np.isfinite(value):
            raise ValueError("dt must be finite")
        return value

    @model_validator(mode="after")
    def _dt_within_horizon(self) -> "RunRequest":
        if self.dt > self.t1:
            raise ValueError("dt must not exceed t1")
        return self


class RunResponse(BaseModel):
    summary: TrajectorySummary
    trajectory: TrajectoryRecord | None = None
