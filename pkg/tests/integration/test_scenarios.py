"""Reproductions of the documented scenario behaviour.

Tests for:
- Arc sequences and switches of normal extremals
- Harmonic dual formulas against a brute-force antisphere search
- Corners on the free Carnot group
- Convergence of the integrator
- Conservation along extremals
"""

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from app.cli.commands import EXIT_NO_EXTREMAL
from app.cli.main import main
from app.cones.base import unit
from app.extremal.analysis import abnormal_check, causal_tag_constant, geometric_coincidence, mixed_causal_witness
from app.extremal.control import CausalType, ControlLawConfig, ScheduleEntry, SelectionRule, control_law
from app.extremal.integrator import energy_flow
from app.groups.reconstruction import corner_trajectory

L, T = CausalType.LIGHT_LIKE, CausalType.TIME_LIKE


def _carnot_control(u1: float, u2: float) -> np.ndarray:
    u = np.zeros(8)
    u[0], u[1] = u1, u2
    return u


def _harmonic_antisphere(theta):
    """Points of {ab / (a + b) = 1} in the quadrant, by polar angle."""
    c, s = np.cos(np.asarray(theta, dtype=float)), np.sin(np.asarray(theta, dtype=float))
    radius = (c + s) / (c * s)
    return np.stack([radius * c, radius * s], axis=-1)


def _brute_force_sup(h1: float, h2: float) -> tuple[np.ndarray, float]:
    """Maximize h1 u1 + h2 u2 over the harmonic antisphere: dense grid, then bounded refinement."""
    grid = np.linspace(1e-3, np.pi / 2 - 1e-3, 20001)
    k = int(np.argmax(_harmonic_antisphere(grid) @ [h1, h2]))
    res = minimize_scalar(
        lambda theta: -float(_harmonic_antisphere(theta) @ [h1, h2]),
        bounds=(grid[k - 1], grid[k + 1]),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return _harmonic_antisphere(res.x), -float(res.fun)


def _dual_level_samples(rng, scenario, level: float, count: int) -> np.ndarray:
    """Covectors with α∨ = level (1 or 0) and negative time component.

    Off-cone coordinates stay small so light-like runs keep clear of the apex.
    """
    k = len(scenario.cone.index)
    space = rng.uniform(-1.0, 1.0, (count, k - 1))
    space *= rng.uniform(0.5, 1.5, (count, 1)) / np.linalg.norm(space, axis=1, keepdims=True)
    rest = rng.uniform(-0.1, 0.1, (count, scenario.dim - k))
    time = -np.sqrt(level + np.sum(space**2, axis=1, keepdims=True))
    return np.hstack([time, space, rest])


@pytest.mark.integration
class TestArcSequences:
    """Causal arcs of normal extremals."""

    @staticmethod
    def test_harmonic_light_time_light(heisenberg_harmonic):
        traj = heisenberg_harmonic.integrate([0.0, -2.0, 1.0], ControlLawConfig(), t1=4.0, dt=0.01)
        assert traj.arcs() == [L, T, L]
        assert len(traj.switches) == 2
        assert traj.switches[0].time == pytest.approx(1.0, abs=0.05)
        assert np.allclose(traj.covectors[:, 2], 1.0)

    @staticmethod
    def test_plane_hybrid_witness_has_both_types(plane_hybrid):
        traj = mixed_causal_witness(plane_hybrid.antinorm)
        assert traj is not None
        assert traj.exhibits_mixed_causality()
        assert traj.arcs() == [L, T]
        assert not causal_tag_constant(traj)

    @staticmethod
    def test_constant_lightlike_schedule_is_rejected(plane_hybrid):
        schedule = (ScheduleEntry(0.0, 2.0, unit([1.0, 1.0])),)
        assert mixed_causal_witness(plane_hybrid.antinorm, schedule=schedule) is None

    @staticmethod
    @pytest.mark.slow
    def test_harmonic_switch_bound(heisenberg_harmonic):
        runs = 0
        for s in np.linspace(0.05, 0.95, 20):
            for h3 in np.linspace(-2.0, 2.0, 10):
                # (sqrt|h1| + sqrt|h2|)^2 = 1
                h0 = [-(s**2), -((1.0 - s) ** 2), h3]
                traj = heisenberg_harmonic.integrate(h0, ControlLawConfig(), t1=4.0, dt=0.02)
                assert not traj.truncated, h0
                assert len(traj.switches) <= 2, h0
                runs += 1
        assert runs == 200

    @staticmethod
    def test_value_below_one_has_no_extremal(tmp_path, capsys):
        config = tmp_path / "run.toml"
        config.write_text('scenario = "heisenberg_quadratic"\ninitial_covector = [-0.5, 0.0, 0.3]\nt1 = 1.0\ndt = 0.1\n')
        assert main(["run", "--config", str(config), "--out", str(tmp_path)]) == EXIT_NO_EXTREMAL
        assert not list(tmp_path.glob("*.csv"))


@pytest.mark.integration
class TestHarmonicFormulas:
    """Closed-form dual and control direction of the harmonic antinorm."""

    @staticmethod
    def test_against_brute_force(heisenberg_harmonic, rng):
        alpha = heisenberg_harmonic.antinorm
        for _ in range(100):
            h1, h2 = -rng.uniform(0.25, 2.5, size=2)
            h3 = rng.uniform(-2.0, 2.0)
            argmax, best = _brute_force_sup(h1, h2)
            value = alpha.dual_value([h1, h2, h3]).as_float()
            assert value == pytest.approx((np.sqrt(-h1) + np.sqrt(-h2)) ** 2, abs=1e-10)
            assert value == pytest.approx(-best, abs=1e-6)

            u = control_law(alpha, np.array([h1, h2, h3]) / value, ControlLawConfig()).u
            direction = np.array([np.sqrt(h2 / h1) + 1.0, np.sqrt(h1 / h2) + 1.0])
            assert u[2] == 0.0
            assert np.allclose(unit(u[:2]), unit(direction), rtol=0.0, atol=1e-6)
            assert np.allclose(unit(u[:2]), unit(argmax), rtol=0.0, atol=1e-6)


@pytest.mark.integration
class TestCarnotCorner:
    """Light-like corner on the free Carnot group of rank 2 and step 4."""

    @staticmethod
    def test_scheduled_run_matches_closed_form(carnot):
        cfg = ControlLawConfig(
            selection_rule=SelectionRule.SCHEDULED,
            schedule=(
                ScheduleEntry(0.0, 1.0, _carnot_control(1.0, 1.0)),
                ScheduleEntry(1.0, 2.0, _carnot_control(1.0, -1.0)),
            ),
        )
        traj = carnot.integrate(np.zeros(8), cfg, t1=2.0, dt=0.1)
        expected = np.array([carnot.group_model.chart(g) for g in corner_trajectory(carnot.group_model, 1.0, 1.0, 2.0, 0.1)])
        assert not traj.truncated
        assert traj.coordinates.shape == expected.shape == (21, 8)
        assert np.max(np.abs(traj.coordinates - expected)) < 1e-8
        assert set(traj.causal_tags) == {L}

        report = abnormal_check(carnot.algebra, carnot.cone, traj)
        assert report.is_abnormal_extremal
        assert report.boundary_ok
        assert report.hamiltonian_ok
        assert report.samples == 21
        assert report.annihilator_samples == 21
        assert not report.lorentzian
        assert report.contact is None

    @staticmethod
    def test_top_layer_covector_is_constant(carnot):
        traj = carnot.integrate(carnot.default_covector, ControlLawConfig(), t1=1.0, dt=0.05)
        top = traj.covectors[:, 5:]
        assert np.allclose(top, top[0], atol=0.0)


@pytest.mark.integration
@pytest.mark.slow
class TestConvergence:
    """Integrator accuracy on the sub-Lorentzian Heisenberg group."""

    H0 = [-1.25, 0.75, 0.5]

    def test_fourth_order_in_dt(self, heisenberg_quadratic):
        reference = heisenberg_quadratic.integrate(self.H0, ControlLawConfig(), t1=1.0, dt=0.0025).coordinates[-1]
        errors = [
            np.linalg.norm(heisenberg_quadratic.integrate(self.H0, ControlLawConfig(), t1=1.0, dt=dt).coordinates[-1] - reference)
            for dt in (0.04, 0.02, 0.01)
        ]
        assert errors[0] > errors[1] > errors[2]
        assert errors[0] / errors[1] > 6.0
        assert errors[1] / errors[2] > 6.0

    def test_coincides_with_energy_flow(self, heisenberg_quadratic):
        traj = heisenberg_quadratic.integrate(self.H0, ControlLawConfig(), t1=1.0, dt=0.01)
        flow = energy_flow(
            heisenberg_quadratic.algebra, [1.0, 1.0], self.H0, t1=1.0, dt=0.01, gm=heisenberg_quadratic.group_model
        )
        assert geometric_coincidence(traj, flow) < 1e-5

    @staticmethod
    def test_coincides_with_energy_flow_on_the_level_set(heisenberg_quadratic, rng):
        for theta, h2 in zip(rng.uniform(-1.0, 1.0, 20), rng.uniform(-1.0, 1.0, 20), strict=True):
            # H = -(h0^2 - h1^2) / 2 = -1/2 with h0 < 0
            h0 = [-np.cosh(theta), np.sinh(theta), h2]
            traj = heisenberg_quadratic.integrate(h0, ControlLawConfig(), t1=1.0, dt=0.01)
            flow = energy_flow(
                heisenberg_quadratic.algebra, [1.0, 1.0], h0, t1=1.0, dt=0.01, gm=heisenberg_quadratic.group_model
            )
            assert geometric_coincidence(traj, flow) <= 1e-4, h0


@pytest.mark.integration
class TestConservation:
    """α∨(h) and the causal tag along extremals of smooth scenarios."""

    @staticmethod
    @pytest.mark.parametrize(
        ("h0", "tag"),
        [([-1.0, 0.0, 0.0], T), ([-1.5, 1.0, 0.5], T), ([-1.0, 1.0, 0.0], L), ([-3.0, 0.0, 3.0], L)],
    )
    def test_minkowski(minkowski, h0, tag):
        traj = minkowski.integrate(h0, ControlLawConfig(), t1=2.0, dt=0.1)
        assert not traj.truncated
        assert traj.causal_types() == {tag}
        assert np.allclose(traj.covectors, h0)
        assert traj.conserved_report["dual_value"] < 1e-9

    @staticmethod
    def test_heisenberg_quadratic(heisenberg_quadratic):
        traj = heisenberg_quadratic.integrate([-1.25, 0.75, 0.5], ControlLawConfig(), t1=3.0, dt=0.01)
        assert not traj.truncated
        assert causal_tag_constant(traj)
        assert np.max(np.abs(traj.dual_values - 1.0)) < 1e-6
        assert traj.conserved_report["hamiltonian"] < 1e-6

    @staticmethod
    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["minkowski", "heisenberg_quadratic"])
    @pytest.mark.parametrize(("level", "tag"), [(1.0, T), (0.0, L)])
    def test_drift_without_retraction(name, level, tag, request, rng):
        scenario = request.getfixturevalue(name)
        cfg = ControlLawConfig(retract=False)
        for h0 in _dual_level_samples(rng, scenario, level, 50):
            traj = scenario.integrate(h0, cfg, t1=5.0, dt=1e-3)
            assert not traj.truncated, h0
            assert traj.causal_types() == {tag}, h0
            assert np.max(np.abs(traj.dual_values - level)) <= 1e-6, h0
