"""Trajectory-level checks: abnormality, geometric coincidence, mixed causality."""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import cdist

from app.antinorms.analysis import boundary_linearity
from app.antinorms.base import Antinorm
from app.antinorms.oracle import maximizer_set
from app.cones.base import ConvexCone, PointClass, unit
from app.config import Settings, get_settings
from app.extremal.control import CausalType, ControlLawConfig, ScheduleEntry, SelectionRule
from app.extremal.integrator import integrate
from app.extremal.schemas import AbnormalReport
from app.extremal.trajectory import Trajectory
from app.groups.models import AbelianGroup
from app.groups.reconstruction import contact_test
from app.lie.algebra import LieAlgebraSpec

logger = logging.getLogger(__name__)

FRECHET_POINTS = 400
WITNESS_ARC_LENGTH = 1.0


def abnormal_check(
    a: LieAlgebraSpec,
    c: ConvexCone,
    traj: Trajectory,
    settings: Settings | None = None,
) -> AbnormalReport:
    """Check that a trajectory is a ν = 0 extremal and apply the light-likeness criteria.

    Samples are tagged by their covector: annihilators of span C are
    sub-Riemannian abnormal, the rest light-like. When span C is the whole
    algebra every sample must be light-like; when the algebra is
    3-dimensional and span C is a contact plane, no sample may annihilate C.
    """
    settings = settings or get_settings()
    if traj.nu != 0:
        logger.info("Checking a nu=%d trajectory against the abnormal conditions", traj.nu)
    dual = c.dual()
    on_boundary = 0
    annihilators = 0
    max_ham = 0.0
    for s in traj.samples:
        scale = max(1.0, float(np.linalg.norm(s.h)))
        if dual.classify_point(s.h, settings.causal_tol) is PointClass.RELATIVE_BOUNDARY:
            on_boundary += 1
        if c.annihilates(s.h, settings.causal_tol):
            annihilators += 1
        max_ham = max(max_ham, abs(float(np.dot(s.h, s.u))) / scale)
    n = len(traj.samples)
    lorentzian = c.span_dim == a.dim
    contact = None
    if a.dim == 3 and c.span_dim == 2:
        contact = contact_test(a, c.span_basis())
    all_lightlike = annihilators == 0 if lorentzian else None
    no_annihilator = annihilators == 0 if contact else None
    boundary_ok = on_boundary == n
    hamiltonian_ok = max_ham <= settings.hamiltonian_tol
    report = AbnormalReport(
        samples=n,
        boundary_ok=boundary_ok,
        hamiltonian_ok=hamiltonian_ok,
        max_hamiltonian=max_ham,
        lightlike_samples=n - annihilators,
        annihilator_samples=annihilators,
        lorentzian=lorentzian,
        contact=contact,
        all_lightlike_ok=all_lightlike,
        no_annihilator_ok=no_annihilator,
        is_abnormal_extremal=boundary_ok and hamiltonian_ok,
    )
    logger.info(
        "Abnormal check: %d/%d boundary samples, %d annihilators, max |H| %.3e",
        on_boundary,
        n,
        annihilators,
        max_ham,
    )
    return report


def _arclength_resample(points: NDArray[np.float64], count: int) -> NDArray[np.float64]:
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if s[-1] == 0.0:
        return np.repeat(points[:1], count, axis=0)
    targets = np.linspace(0.0, s[-1], count)
    return np.column_stack([np.interp(targets, s, points[:, j]) for j in range(points.shape[1])])


def discrete_frechet(p: NDArray[np.float64], q: NDArray[np.float64]) -> float:
    """Discrete Fréchet distance between two polylines."""
    d = cdist(p, q)
    ca = np.empty_like(d)
    ca[0, :] = np.maximum.accumulate(d[0, :])
    ca[:, 0] = np.maximum.accumulate(d[:, 0])
    for i in range(1, len(p)):
        for j in range(1, len(q)):
            ca[i, j] = max(min(ca[i - 1, j], ca[i - 1, j - 1], ca[i, j - 1]), d[i, j])
    return float(ca[-1, -1])


def geometric_coincidence(t1: Trajectory, t2: Trajectory, points: int = FRECHET_POINTS) -> float:
    """Fréchet distance between the images of two trajectories in chart coordinates.

    Both curves are resampled at equal arclength before comparison, so the
    result does not depend on the parametrization.
    """
    if not len(t1) or not len(t2):
        raise ValueError("both trajectories must be nonempty")
    a = _arclength_resample(t1.coordinates, points)
    b = _arclength_resample(t2.coordinates, points)
    return discrete_frechet(a, b)


def mixed_causal_witness(
    an: Antinorm,
    arc_length: float = WITNESS_ARC_LENGTH,
    schedule: tuple[ScheduleEntry, ...] | None = None,
) -> Trajectory | None:
    """Normal extremal with both causal types, built from a boundary-linearity witness.

    On the abelian group the covector stays at the witness p (rescaled to
    α∨(p) = 1); the control follows a light-like ray of p∨_0 on the first
    arc and a time-like maximizer of p∨_1 on the second. A given
    ``schedule`` replaces these two arcs. Runs that stay on one causal type
    are rejected.
    """
    p = boundary_linearity(an)
    if p is None:
        return None
    value = an.dual_value(p).as_float()
    proj = an.cone.span_projector @ p
    p = p + proj * (1.0 / value - 1.0)
    if schedule is None:
        rays = maximizer_set(an, p, 0.0).points
        ones = maximizer_set(an, p, 1.0).points
        if len(rays) == 0 or len(ones) == 0:
            return None
        lightlike = unit(rays[np.lexsort(rays.T[::-1])[0]])
        timelike = ones[np.lexsort(ones.T[::-1])[0]]
        schedule = (
            ScheduleEntry(0.0, arc_length, lightlike),
            ScheduleEntry(arc_length, 2 * arc_length, timelike),
        )
    cfg = ControlLawConfig(nu=1, selection_rule=SelectionRule.SCHEDULED, schedule=schedule)
    horizon = schedule[-1].end
    algebra = LieAlgebraSpec.abelian(an.dim)
    traj = integrate(algebra, an, p, cfg, horizon, horizon / 100, AbelianGroup(algebra))
    if not traj.exhibits_mixed_causality() or traj.truncated:
        logger.info("Witness %s did not produce both causal types", p.tolist())
        return None
    logger.info("Mixed causal witness at p=%s: arcs %s", p.tolist(), [t.value for t in traj.arcs()])
    return traj


def causal_tag_constant(traj: Trajectory) -> bool:
    return len(traj.causal_types() - {CausalType.SUB_RIEMANNIAN_ABNORMAL}) <= 1
