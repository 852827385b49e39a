"""Unit tests for trajectory analysis.

Tests for:
- Abnormal extremal checks
- Fréchet distance and geometric coincidence
- Causal tag helpers
"""

import numpy as np
import pytest

from app.extremal.analysis import (
    abnormal_check,
    causal_tag_constant,
    discrete_frechet,
    geometric_coincidence,
)
from app.extremal.control import CausalType, ControlLawConfig
from app.extremal.trajectory import ExtremalState, Trajectory


@pytest.mark.unit
class TestAbnormalCheck:
    """Tests for ν = 0 verdicts."""

    @staticmethod
    def test_minkowski_abnormal_is_light_like(minkowski):
        traj = minkowski.integrate([-1.0, 1.0, 0.0], ControlLawConfig(nu=0), t1=1.0, dt=0.1)
        report = abnormal_check(minkowski.algebra, minkowski.cone, traj)
        assert report.is_abnormal_extremal
        assert report.lorentzian
        assert report.all_lightlike_ok is True
        assert report.contact is None
        assert report.annihilator_samples == 0

    @staticmethod
    def test_heisenberg_contact_distribution(heisenberg_quadratic):
        traj = heisenberg_quadratic.integrate([-1.0, 1.0, 0.0], ControlLawConfig(nu=0), t1=0.5, dt=0.1)
        report = abnormal_check(heisenberg_quadratic.algebra, heisenberg_quadratic.cone, traj)
        assert report.contact is True
        assert not report.lorentzian
        assert report.boundary_ok
        assert report.no_annihilator_ok is True

    @staticmethod
    def test_normal_time_like_is_not_abnormal(minkowski):
        traj = minkowski.integrate([-1.0, 0.0, 0.0], ControlLawConfig(nu=1), t1=0.5, dt=0.1)
        report = abnormal_check(minkowski.algebra, minkowski.cone, traj)
        assert not report.boundary_ok
        assert not report.is_abnormal_extremal


@pytest.mark.unit
class TestCoincidence:
    """Tests for comparing curve images."""

    @staticmethod
    def test_frechet_of_parallel_segments():
        p = np.array([[0.0, 0.0], [1.0, 0.0]])
        q = np.array([[0.0, 1.0], [1.0, 1.0]])
        assert discrete_frechet(p, q) == pytest.approx(1.0)

    @staticmethod
    def test_image_does_not_depend_on_sampling(minkowski):
        coarse = minkowski.integrate([-1.0, 0.0, 0.0], ControlLawConfig(), t1=1.0, dt=0.25)
        fine = minkowski.integrate([-1.0, 0.0, 0.0], ControlLawConfig(), t1=1.0, dt=0.05)
        assert geometric_coincidence(coarse, fine, points=50) < 1e-12

    @staticmethod
    def test_empty_trajectory_rejected(minkowski):
        traj = minkowski.integrate([-1.0, 0.0, 0.0], ControlLawConfig(), t1=1.0, dt=0.5)
        with pytest.raises(ValueError):
            geometric_coincidence(traj, Trajectory(samples=[], dt=0.1, nu=1))


@pytest.mark.unit
class TestCausalTags:
    """Tests for tag helpers on trajectories."""

    @staticmethod
    def _trajectory(tags: list[CausalType]) -> Trajectory:
        samples = [
            ExtremalState(float(i), np.zeros(2), np.zeros(2), np.zeros(2), tag, 0.0) for i, tag in enumerate(tags)
        ]
        return Trajectory(samples=samples, dt=1.0, nu=1)

    def test_arcs_and_mixed_causality(self):
        L, T = CausalType.LIGHT_LIKE, CausalType.TIME_LIKE
        traj = self._trajectory([L, L, T, T, L])
        assert traj.arcs() == [L, T, L]
        assert traj.exhibits_mixed_causality()
        assert not causal_tag_constant(traj)

    def test_abnormal_tags_do_not_break_constancy(self):
        traj = self._trajectory([CausalType.LIGHT_LIKE, CausalType.SUB_RIEMANNIAN_ABNORMAL])
        assert causal_tag_constant(traj)
        assert not traj.exhibits_mixed_causality()
