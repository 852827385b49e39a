"""Unit tests for the control law.

Tests for:
- Branch classification for ν = 1 and ν = 0
- Maximizing controls and their normalization
- Schedules and prescribed controls
- Control-law settings schema
"""

import numpy as np
import pytest
from pydantic import ValidationError

from app.cones.base import PointClass
from app.exceptions import ConfigError, NoMaximumError
from app.extremal.control import (
    CausalType,
    ControlLawConfig,
    ScheduleEntry,
    SelectionRule,
    classify_covector,
    control_causal_type,
    control_law,
    hamiltonian,
)
from app.extremal.schemas import ControlLawSettings

NORMAL = ControlLawConfig(nu=1)
ABNORMAL = ControlLawConfig(nu=0)


@pytest.mark.unit
class TestNormalBranch:
    """ν = 1."""

    @staticmethod
    def test_time_like_control(minkowski):
        control = control_law(minkowski.antinorm, [-1.0, 0.0, 0.0], NORMAL)
        assert control.causal is CausalType.TIME_LIKE
        assert np.allclose(control.u, [1.0, 0.0, 0.0])
        assert control.dual_value == pytest.approx(1.0)

    @staticmethod
    def test_time_like_control_is_on_unit_antisphere(minkowski):
        h = np.array([-np.sqrt(2.0), 1.0, 0.0])
        control = control_law(minkowski.antinorm, h, NORMAL)
        assert control.causal is CausalType.TIME_LIKE
        assert minkowski.antinorm.eval(control.u) == pytest.approx(1.0)
        assert hamiltonian(minkowski.antinorm, h, control.u, 1) == pytest.approx(0.0, abs=1e-12)

    @staticmethod
    def test_light_like_control(minkowski):
        control = control_law(minkowski.antinorm, [-1.0, 1.0, 0.0], NORMAL)
        assert control.causal is CausalType.LIGHT_LIKE
        assert np.allclose(control.u, np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0))

    @staticmethod
    def test_wrong_level_has_no_maximum(minkowski):
        with pytest.raises(NoMaximumError) as exc_info:
            control_law(minkowski.antinorm, [-2.0, 1.0, 0.0], NORMAL)
        assert exc_info.value.nu == 1

    @staticmethod
    def test_outside_dual_cone_has_no_maximum(minkowski):
        with pytest.raises(NoMaximumError):
            classify_covector(minkowski.antinorm, [1.0, 0.0, 0.0], NORMAL)

    @staticmethod
    def test_annihilator_has_no_normal_maximum(heisenberg_quadratic):
        with pytest.raises(NoMaximumError):
            control_law(heisenberg_quadratic.antinorm, [0.0, 0.0, 1.0], NORMAL)

    @staticmethod
    def test_harmonic_between_zero_and_one_has_no_maximum(heisenberg_harmonic):
        # α∨(0, -1/2, 0) = 1/2 on the boundary of the dual cone
        with pytest.raises(NoMaximumError):
            control_law(heisenberg_harmonic.antinorm, [0.0, -0.5, 0.0], NORMAL)


@pytest.mark.unit
class TestAbnormalBranch:
    """ν = 0."""

    @staticmethod
    def test_boundary_covector_is_light_like(minkowski):
        control = control_law(minkowski.antinorm, [-1.0, 1.0, 0.0], ABNORMAL)
        assert control.causal is CausalType.LIGHT_LIKE

    @staticmethod
    def test_interior_covector_has_no_maximum(minkowski):
        with pytest.raises(NoMaximumError) as exc_info:
            control_law(minkowski.antinorm, [-1.0, 0.0, 0.0], ABNORMAL)
        assert exc_info.value.nu == 0

    @staticmethod
    def test_annihilator_is_sub_riemannian_abnormal(heisenberg_quadratic):
        control = control_law(heisenberg_quadratic.antinorm, [0.0, 0.0, 1.0], ABNORMAL)
        assert control.causal is CausalType.SUB_RIEMANNIAN_ABNORMAL
        assert np.linalg.norm(control.u) == pytest.approx(1.0)
        assert heisenberg_quadratic.cone.classify_point(control.u) is PointClass.RELATIVE_INTERIOR


@pytest.mark.unit
class TestSchedules:
    """Tests for scheduled controls."""

    @staticmethod
    def _two_intervals() -> ControlLawConfig:
        return ControlLawConfig(
            selection_rule=SelectionRule.SCHEDULED,
            schedule=(
                ScheduleEntry(0.0, 1.0, np.array([1.0, 0.0, 0.0])),
                ScheduleEntry(1.0, 2.0, np.array([1.0, 1.0, 0.0])),
            ),
        )

    def test_intervals_are_half_open(self):
        cfg = self._two_intervals()
        assert cfg.scheduled_entry(0.5).start == 0.0
        assert cfg.scheduled_entry(1.0).start == 1.0
        assert cfg.scheduled_entry(2.0).start == 1.0
        assert cfg.scheduled_entry(2.5) is None
        assert cfg.breakpoints() == [0.0, 1.0, 2.0]

    @staticmethod
    def test_invalid_configs():
        with pytest.raises(ConfigError):
            ControlLawConfig(nu=2)
        with pytest.raises(ConfigError):
            ControlLawConfig(selection_rule=SelectionRule.SCHEDULED)
        with pytest.raises(ConfigError) as exc_info:
            ControlLawConfig(
                selection_rule=SelectionRule.SCHEDULED,
                schedule=(
                    ScheduleEntry(0.0, 2.0, np.ones(2)),
                    ScheduleEntry(1.0, 3.0, np.ones(2)),
                ),
            )
        assert exc_info.value.diagnostics[0][0] == "schedule.1"

    @staticmethod
    def test_prescribed_control_types(minkowski):
        an = minkowski.antinorm
        assert control_causal_type(an, [1.0, 0.0, 0.0], 1) is CausalType.TIME_LIKE
        assert control_causal_type(an, [1.0, 0.0, 0.0], 0) is CausalType.SUB_RIEMANNIAN_ABNORMAL
        assert control_causal_type(an, [1.0, 1.0, 0.0], 1) is CausalType.LIGHT_LIKE
        with pytest.raises(ConfigError):
            control_causal_type(an, [0.0, 1.0, 0.0], 1)
        with pytest.raises(ConfigError):
            control_causal_type(an, [0.0, 0.0, 0.0], 1)


@pytest.mark.unit
class TestControlLawSettings:
    """Tests for the wire form of the control law."""

    @staticmethod
    def test_to_config():
        cfg = ControlLawSettings(
            selection_rule="Scheduled",
            schedule=[{"start": 0.0, "end": 1.0, "control": [1.0, 1.0]}],
        ).to_config()
        assert cfg.selection_rule is SelectionRule.SCHEDULED
        assert np.allclose(cfg.schedule[0].control, [1.0, 1.0])

    @staticmethod
    def test_rejections():
        with pytest.raises(ValidationError):
            ControlLawSettings(selection_rule="Scheduled")
        with pytest.raises(ValidationError):
            ControlLawSettings(nu=2)
        with pytest.raises(ValidationError):
            ControlLawSettings(causal_tol=0.0)
        with pytest.raises(ValidationError):
            ControlLawSettings(schedule=[{"start": 1.0, "end": 1.0, "control": [1.0]}])
