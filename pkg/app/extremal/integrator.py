"""Runge-Kutta integration of extremals with state-feedback controls.

The covector follows the conjugate subsystem ḣ = poisson_rhs(h, u(h)) with
the control recomputed at every Runge-Kutta stage; the group element is
updated by an exact exponential per sub-step. Sub-steps shrink when the
covector would move too far, when a stage leaves the region where the
current branch has a control, and while a natural change of causal type is
being localized. A branch that stalls is continued on the other causal
branch after a small move of the covector.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from app.antinorms.base import Antinorm, DualFunctionResult
from app.antinorms.oracle import canonical_maximizer
from app.antinorms.variants import QuadraticAntinorm
from app.cones.base import PointClass, Vector, unit
from app.cones.lorentz import LorentzCone
from app.exceptions import ConeLieError, DimensionMismatchError, NoMaximumError, StepRejectedError
from app.extremal.control import (
    CausalType,
    ControlLawConfig,
    ScheduleEntry,
    classify_covector,
    control_causal_type,
    hamiltonian,
    lightlike_ray,
)
from app.extremal.trajectory import ExtremalState, Switch, Trajectory
from app.groups.models import GroupElement, GroupModel
from app.groups.reconstruction import magnus_step, sample_times
from app.lie.algebra import LieAlgebraSpec, poisson_rhs

logger = logging.getLogger(__name__)

NUDGE_SCALE = 1e-6


class BranchLostError(ConeLieError):
    """Raised when neither causal branch can be continued."""


@dataclass(frozen=True)
class _Cursor:
    t: float
    g: GroupElement
    h: Vector
    causal: CausalType
    control: Vector
    result: DualFunctionResult | None = None
    entry: ScheduleEntry | None = None


class ExtremalIntegrator:
    """Integrates one extremal for fixed algebra, antinorm, control law and group model."""

    def __init__(
        self,
        algebra: LieAlgebraSpec,
        antinorm: Antinorm,
        cfg: ControlLawConfig,
        gm: GroupModel,
    ) -> None:
        for what, dim in (("antinorm", antinorm.dim), ("group model", gm.dim)):
            if dim != algebra.dim:
                raise DimensionMismatchError(algebra.dim, dim, what)
        self.algebra = algebra
        self.antinorm = antinorm
        self.cfg = cfg
        self.gm = gm
        self.settings = antinorm.settings
        self._cone = antinorm.cone
        self._dual = antinorm.cone.dual()
        self._lorentz = self._cone if isinstance(self._cone, LorentzCone) else None
        self._quadratic = antinorm if isinstance(antinorm, QuadraticAntinorm) else None
        self._entry_types = [control_causal_type(antinorm, e.control, cfg.nu) for e in cfg.schedule]
        self._breakpoints = cfg.breakpoints()
        self._dt = 0.0

    # ------------------------------------------------------------------
    # Public entry point
    # ------------------------------------------------------------------

    def run(self, h0: ArrayLike, t1: float, dt: float) -> Trajectory:
        """Integrate from g = id and h(0) = h0 on [0, t1].

        Raises:
            ValueError: If t1 or dt is invalid
            NoMaximumError: If no extremal passes through h0
        """
        if t1 <= 0 or dt <= 0 or dt > t1:
            raise ValueError("need t1 > 0 and 0 < dt <= t1")
        self._dt = dt
        cursor = self._start(self.algebra.check_vector(h0, "initial covector"))
        samples = [self._sample(cursor, 0.0)]
        events: list[tuple[float, CausalType, CausalType]] = []
        diagnostics: list[str] = []
        truncated = False

        for t_next in sample_times(t1, dt)[1:]:
            try:
                cursor, new_events = self._advance_checked(cursor, float(t_next))
            except (NoMaximumError, BranchLostError, StepRejectedError) as exc:
                message = f"truncated at t={cursor.t:.9g}: {exc}"
                logger.warning("Extremal %s", message)
                diagnostics.append(message)
                truncated = True
                break
            events.extend(new_events)
            samples.append(self._sample(cursor, float(t_next)))

        trajectory = Trajectory(
            samples=samples,
            dt=dt,
            nu=self.cfg.nu,
            switches=_switches(samples, events),
            conserved_report=self._drift_report(samples),
            diagnostics=diagnostics,
            truncated=truncated,
            chart_labels=self.gm.chart_labels,
        )
        logger.info(
            "Integrated %d samples to t=%.6g; arcs %s",
            len(samples),
            samples[-1].t,
            " -> ".join(tag.value for tag in trajectory.arcs()),
        )
        return trajectory

    # ------------------------------------------------------------------
    # Branch bookkeeping
    # ------------------------------------------------------------------

    def _entry_type(self, entry: ScheduleEntry) -> CausalType:
        return self._entry_types[self.cfg.schedule.index(entry)]

    def _start(self, h0: Vector) -> _Cursor:
        g0 = self.gm.identity()
        entry = self.cfg.scheduled_entry(0.0)
        if entry is not None:
            return _Cursor(0.0, g0, h0, self._entry_type(entry), entry.control, entry=entry)
        return self._classified(0.0, g0, h0, previous=None)

    def _classified(self, t: float, g: GroupElement, h: Vector, previous: Vector | None) -> _Cursor:
        causal, result = classify_covector(self.antinorm, h, self.cfg)
        control = self._branch_control(h, causal, result, previous)
        if control is None:
            raise NoMaximumError(h, self.cfg.nu, f"no {causal.value} control at this covector")
        return _Cursor(t, g, h, causal, control, result)

    def _branch_control(
        self,
        h: Vector,
        causal: CausalType,
        result: DualFunctionResult,
        previous: Vector | None,
    ) -> Vector | None:
        if causal is CausalType.SUB_RIEMANNIAN_ABNORMAL:
            return unit(self._cone.interior_point())
        if causal is CausalType.LIGHT_LIKE:
            if self._lorentz is not None:
                w = self._lorentz.boundary_direction(h)
                return unit(w) if np.any(w) else None
            ray = lightlike_ray(self.antinorm, h)
            return previous if ray is None else ray
        if result.unique and result.maximizer is not None:
            return result.maximizer
        if previous is not None:
            return previous
        return canonical_maximizer(self.antinorm, h, result)

    def _dual_scalar(self, h: Vector) -> float:
        if self._quadratic is not None:
            position = self._dual.classify_point(h, self.settings.membership_tol)
            if position is PointClass.OUTSIDE:
                return float("-inf")
            if position is PointClass.RELATIVE_BOUNDARY:
                return 0.0
            return float(np.sqrt(self._quadratic.dual_quadratic(h)))
        try:
            return self.antinorm.dual_value(h).as_float()
        except ConeLieError:
            return float("-inf")

    def _retract(self, h: Vector) -> Vector | None:
        """Rescale the span-C component so that α∨(h) = 1."""
        value = self._dual_scalar(h)
        if not np.isfinite(value) or value <= 0:
            return None
        proj = self._cone.span_projector @ h
        return h + proj * (1.0 / value - 1.0)

    def _stage_control(self, h: Vector, causal: CausalType, frozen: Vector, entry: ScheduleEntry | None) -> Vector | None:
        """Control at a Runge-Kutta stage, or None when the branch has none there."""
        if entry is not None or causal is CausalType.SUB_RIEMANNIAN_ABNORMAL:
            return frozen
        if causal is CausalType.LIGHT_LIKE:
            if self._lorentz is None:
                return frozen
            w = self._lorentz.boundary_direction(h)
            if self._lorentz.sign * w[self._lorentz.time_index] <= 0:
                return None
            return unit(w)
        if self._quadratic is not None:
            value = self._dual_scalar(h)
            if not np.isfinite(value) or value <= 0:
                return None
            return self._quadratic.feedback(h) / value
        try:
            res = self.antinorm.dual_value(h)
        except ConeLieError:
            return None
        if not res.finite or res.as_float() <= 0 or not res.attained or res.maximizer is None:
            return None
        return res.maximizer if res.unique else frozen

    # ------------------------------------------------------------------
    # Stepping
    # ------------------------------------------------------------------

    def _advance_checked(self, cursor: _Cursor, t_end: float) -> tuple[_Cursor, list[tuple[float, CausalType, CausalType]]]:
        """Advance to the next sample; steps breaking the zero-Hamiltonian bound are redone finer."""
        limit = self.settings.hamiltonian_reject_tol
        retrying = Retrying(
            stop=stop_after_attempt(self.settings.step_rejection_attempts),
            retry=retry_if_exception_type(StepRejectedError),
            reraise=True,
        )
        for attempt in retrying:
            with attempt:
                refine = 2 ** (attempt.retry_state.attempt_number - 1)
                if refine > 1:
                    logger.info("Re-integrating [%.9g, %.9g] with sub-steps refined %dx", cursor.t, t_end, refine)
                new, events = self._advance(cursor, t_end, refine)
                drift = hamiltonian(self.antinorm, new.h, new.control, self.cfg.nu)
                if abs(drift) > limit:
                    raise StepRejectedError(drift, limit)
                return new, events
        raise AssertionError("unreachable")

    def _next_breakpoint(self, t: float) -> float:
        for b in self._breakpoints:
            if b > t + 1e-12 * max(1.0, abs(t)):
                return b - t
        return np.inf

    def _advance(self, cursor: _Cursor, t_end: float, refine: int) -> tuple[_Cursor, list[tuple[float, CausalType, CausalType]]]:
        settings = self.settings
        min_tau = self._dt * settings.min_substep_fraction
        switch_tau = self._dt / 2**settings.switch_bisections
        max_rel = settings.max_relative_substep / refine
        eps_t = 1e-12 * max(1.0, t_end)
        events: list[tuple[float, CausalType, CausalType]] = []
        tau = (t_end - cursor.t) / refine
        grow = False
        count = 0
        while t_end - cursor.t > eps_t:
            count += 1
            if count > settings.max_substeps:
                raise BranchLostError(f"sub-step budget of {settings.max_substeps} exhausted")
            remaining = t_end - cursor.t
            tau = min(tau, remaining, self._next_breakpoint(cursor.t))
            if remaining - tau <= eps_t:
                tau = remaining
            new = self._substep(cursor, tau, max_rel, allow_switch=tau <= switch_tau)
            if new is None:
                tau /= 2.0
                grow = False
                if tau < min_tau:
                    forced = self._force_entry(cursor)
                    events.append((forced.t, cursor.causal, forced.causal))
                    cursor = forced
                    tau = (t_end - cursor.t) / refine
                continue
            if new.causal is not cursor.causal:
                events.append((new.t, cursor.causal, new.causal))
                logger.info("Causal switch %s -> %s at t=%.9g", cursor.causal.value, new.causal.value, new.t)
            cursor = new
            if grow:
                tau *= 2.0
            grow = True
        return cursor, events

    def _substep(self, cursor: _Cursor, tau: float, max_rel: float, allow_switch: bool) -> _Cursor | None:
        entry = self.cfg.scheduled_entry(cursor.t + 0.5 * tau)
        if entry is not None:
            causal, frozen = self._entry_type(entry), entry.control
        else:
            if cursor.entry is not None:
                cursor = self._classified(cursor.t, cursor.g, cursor.h, previous=None)
            causal, frozen = cursor.causal, cursor.control

        h = cursor.h
        stages: list[Vector] = []
        slopes: list[Vector] = []
        for weight in (0.0, 0.5, 0.5, 1.0):
            point = h if not slopes else h + weight * tau * slopes[-1]
            u = self._stage_control(point, causal, frozen, entry)
            if u is None:
                return None
            k = poisson_rhs(self.algebra, point, u)
            if not slopes and tau * float(np.linalg.norm(k)) > max_rel * float(np.linalg.norm(h)):
                return None
            stages.append(u)
            slopes.append(k)
        k1, k2, k3, k4 = slopes
        h_new = h + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        g_new = magnus_step(self.gm, cursor.g, stages, tau)
        t_new = cursor.t + tau
        if entry is not None:
            return _Cursor(t_new, g_new, h_new, causal, frozen, entry=entry)

        if self.cfg.retract and causal is CausalType.TIME_LIKE:
            retracted = self._retract(h_new)
            if retracted is None:
                return None
            h_new = retracted
        try:
            new_causal, result = classify_covector(self.antinorm, h_new, self.cfg)
        except NoMaximumError:
            return None
        if new_causal is not causal and not allow_switch:
            return None
        previous = frozen if new_causal is causal else None
        control = self._branch_control(h_new, new_causal, result, previous)
        if control is None:
            return None
        return _Cursor(t_new, g_new, h_new, new_causal, control, result)

    def _force_entry(self, cursor: _Cursor) -> _Cursor:
        """Continue a stalled branch on the other causal branch.

        Raises:
            BranchLostError: If the other branch has no control either
        """
        h = cursor.h
        if cursor.causal is CausalType.TIME_LIKE:
            target = CausalType.LIGHT_LIKE
            moved: Vector | None = self._dual.nearest_boundary(h)
            if moved is not None and self._dual_scalar(moved) > 0:
                moved = self._retract(moved)
        elif cursor.causal is CausalType.LIGHT_LIKE:
            target = CausalType.TIME_LIKE
            eps = NUDGE_SCALE * max(1.0, float(np.linalg.norm(h)))
            moved = self._retract(h + eps * unit(self._dual.interior_point()))
        else:
            raise BranchLostError(f"{cursor.causal.value} branch stalled")
        if moved is None:
            raise BranchLostError(f"{cursor.causal.value} branch stalled and {target.value} is unreachable")
        try:
            entered = self._classified(cursor.t, cursor.g, moved, previous=None)
        except NoMaximumError as exc:
            raise BranchLostError(f"{cursor.causal.value} branch stalled: {exc.reason}") from exc
        if entered.causal is not target:
            raise BranchLostError(f"{cursor.causal.value} branch stalled; landed on {entered.causal.value}")
        logger.info(
            "Branch %s stalled at t=%.9g; continuing as %s",
            cursor.causal.value,
            cursor.t,
            target.value,
        )
        return entered

    # ------------------------------------------------------------------
    # Samples
    # ------------------------------------------------------------------

    def _sample(self, cursor: _Cursor, t: float) -> ExtremalState:
        entry = self.cfg.scheduled_entry(t)
        if entry is not None:
            u, causal = entry.control, self._entry_type(entry)
            dual = self._dual_scalar(cursor.h)
        else:
            if cursor.entry is not None:
                cursor = self._classified(cursor.t, cursor.g, cursor.h, previous=None)
            u, causal = cursor.control, cursor.causal
            dual = cursor.result.as_float() if cursor.result is not None else self._dual_scalar(cursor.h)
        return ExtremalState(
            t=t,
            g=self.gm.chart(cursor.g),
            h=cursor.h.copy(),
            u=np.asarray(u, dtype=float).copy(),
            causal=causal,
            dual_value=dual,
        )

    def _drift_report(self, samples: list[ExtremalState]) -> dict[str, float]:
        ham = max(abs(hamiltonian(self.antinorm, s.h, s.u, self.cfg.nu)) for s in samples)
        finite = [s.dual_value for s in samples if np.isfinite(s.dual_value)]
        drift = max((abs(v - finite[0]) for v in finite), default=0.0)
        return {"hamiltonian": float(ham), "dual_value": float(drift)}


def _switches(samples: list[ExtremalState], events: list[tuple[float, CausalType, CausalType]]) -> list[Switch]:
    out = []
    for prev, cur in zip(samples, samples[1:]):
        if prev.causal is cur.causal:
            continue
        inside = [t for t, _, _ in events if prev.t < t <= cur.t]
        out.append(Switch(inside[-1] if inside else cur.t, prev.causal, cur.causal))
    return out


def integrate(
    a: LieAlgebraSpec,
    an: Antinorm,
    h0: ArrayLike,
    cfg: ControlLawConfig,
    t1: float,
    dt: float,
    gm: GroupModel,
) -> Trajectory:
    """Integrate the extremal through h0 on [0, t1] with sample spacing dt.

    Raises:
        NoMaximumError: If the control law has no maximum at h0
        ConfigError: If a scheduled control is not in C \\ 0
    """
    return ExtremalIntegrator(a, an, cfg, gm).run(h0, t1, dt)


def energy_flow(
    a: LieAlgebraSpec,
    weights: ArrayLike,
    h0: ArrayLike,
    t1: float,
    dt: float,
    gm: GroupModel,
    index: ArrayLike | None = None,
    causal_tol: float = 1e-7,
) -> Trajectory:
    """Smooth Hamiltonian flow of H = -1/2 (h0^2/c0 - sum h_m^2/c_m).

    The control is the feedback u = (-h0/c0, h1/c1, ..., hr/cr) on the
    coordinates ``index`` (0-based, defaults to the first r + 1).
    """
    c = np.asarray(weights, dtype=float)
    idx = list(range(len(c))) if index is None else [int(i) for i in np.asarray(index)]
    cone = LorentzCone(a.dim, idx, c)
    hh = a.check_vector(h0, "initial covector")
    if t1 <= 0 or dt <= 0 or dt > t1:
        raise ValueError("need t1 > 0 and 0 < dt <= t1")

    def feedback(h: Vector) -> Vector:
        return cone.boundary_direction(h)

    def dual_quadratic(h: Vector) -> float:
        x = h[idx]
        return float(x[0] ** 2 / c[0] - np.dot(x[1:] ** 2, 1.0 / c[1:]))

    def state(t: float, g: GroupElement, h: Vector) -> ExtremalState:
        q = dual_quadratic(h)
        scale = float(np.dot(h[idx], h[idx]))
        causal = CausalType.LIGHT_LIKE if abs(q) <= causal_tol * max(scale, 1e-300) else CausalType.TIME_LIKE
        return ExtremalState(t, gm.chart(g), h.copy(), feedback(h), causal, float(np.sqrt(max(q, 0.0))))

    g = gm.identity()
    h = hh.copy()
    h_start = -0.5 * dual_quadratic(h)
    samples = [state(0.0, g, h)]
    t = 0.0
    for t_next in sample_times(t1, dt)[1:]:
        tau = float(t_next) - t
        u1 = feedback(h)
        k1 = poisson_rhs(a, h, u1)
        u2 = feedback(h + 0.5 * tau * k1)
        k2 = poisson_rhs(a, h + 0.5 * tau * k1, u2)
        u3 = feedback(h + 0.5 * tau * k2)
        k3 = poisson_rhs(a, h + 0.5 * tau * k2, u3)
        u4 = feedback(h + tau * k3)
        k4 = poisson_rhs(a, h + tau * k3, u4)
        h = h + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        g = magnus_step(gm, g, [u1, u2, u3, u4], tau)
        t = float(t_next)
        samples.append(state(t, g, h))

    drift = max(abs(-0.5 * dual_quadratic(s.h) - h_start) for s in samples)
    tags = [s.causal for s in samples]
    switches = [
        Switch(cur.t, prev.causal, cur.causal)
        for prev, cur in zip(samples, samples[1:])
        if prev.causal is not cur.causal
    ]
    logger.info("Energy flow: %d samples, Hamiltonian drift %.3e", len(samples), drift)
    return Trajectory(
        samples=samples,
        dt=dt,
        nu=1,
        switches=switches,
        conserved_report={"hamiltonian": float(drift), "dual_value": float(_value_drift(samples))},
        diagnostics=[] if len(set(tags)) == 1 else ["causal type changed along the energy flow"],
        chart_labels=gm.chart_labels,
    )


def _value_drift(samples: list[ExtremalState]) -> float:
    values = np.array([s.dual_value for s in samples])
    return float(np.max(np.abs(values - values[0])))
