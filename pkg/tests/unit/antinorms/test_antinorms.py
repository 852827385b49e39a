"""Unit tests for antinorms and their dual functions.

Tests for:
- Evaluation on and off the cone
- Closed-form and numeric dual functions
- Maximizer sets
- Axiom checks and boundary linearity
- Antinorm config schemas
"""

import numpy as np
import pytest
from pydantic import TypeAdapter

from app.antinorms.analysis import additivity_defect, boundary_linearity, check_axioms, describe_dual
from app.antinorms.base import NEG_INF, DualMethod, format_value, parse_value
from app.antinorms.oracle import maximizer_set, numeric_dual
from app.antinorms.schemas import AntinormConfig, HarmonicAntinormConfig, QuadraticAntinormConfig
from app.antinorms.variants import HarmonicAntinorm, PiecewiseLinearAntinorm, QuadraticAntinorm
from app.cones.lorentz import LorentzCone
from app.cones.polyhedral import PolyhedralCone
from app.cones.sector import SectorCone
from app.exceptions import ConstructionError, DimensionMismatchError, EmptyDomainError


def _minkowski() -> QuadraticAntinorm:
    return QuadraticAntinorm(LorentzCone(3, [0, 1, 2]))


def _quadrant_harmonic() -> HarmonicAntinorm:
    return HarmonicAntinorm(SectorCone([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]))


@pytest.mark.unit
class TestEvaluation:
    """Tests for α on and off the cone."""

    @staticmethod
    def test_quadratic_values():
        alpha = _minkowski()
        assert alpha.eval([2.0, 1.0, 0.0]) == pytest.approx(np.sqrt(3.0))
        assert alpha.eval([1.0, 1.0, 0.0]) == 0.0
        assert alpha.eval([0.0, 1.0, 0.0]) is NEG_INF

    @staticmethod
    def test_hybrid_formula_on_both_halves(plane_hybrid):
        alpha = plane_hybrid.antinorm
        # y - x for x >= 0, sqrt(y^2 - x^2) for x < 0
        assert alpha.eval([0.0, 1.0]) == pytest.approx(1.0)
        assert alpha.eval([1.0, 2.0]) == pytest.approx(1.0)
        assert alpha.eval([-1.0, 2.0]) == pytest.approx(np.sqrt(3.0))

    @staticmethod
    def test_hybrid_vanishes_exactly_on_boundary(plane_hybrid, rng):
        alpha = plane_hybrid.antinorm
        assert alpha.eval([-1.0, 1.0]) == 0.0
        assert alpha.eval([2.0, 2.0]) == 0.0
        assert np.all(alpha.values(plane_hybrid.cone.sample_boundary(rng, 500)) == 0.0)

    @staticmethod
    def test_harmonic_vanishes_on_rays():
        alpha = _quadrant_harmonic()
        assert alpha.eval([3.0, 0.0, 0.0]) == 0.0
        assert alpha.eval([1.0, 1.0, 5.0]) is NEG_INF
        assert alpha.eval([2.0, 2.0, 0.0]) == pytest.approx(1.0)

    @staticmethod
    def test_wrong_length_rejected():
        with pytest.raises(DimensionMismatchError):
            _minkowski().eval([1.0, 0.0])

    @staticmethod
    def test_value_text_form():
        assert format_value(NEG_INF) == "-inf"
        assert parse_value(" -inf ") is NEG_INF
        assert format_value(0.1) == "0.10000000000000001"
        assert parse_value(format_value(0.1)) == 0.1

    @staticmethod
    def test_quadratic_needs_lorentz_cone():
        with pytest.raises(ConstructionError):
            QuadraticAntinorm(SectorCone([1.0, 1.0], [-1.0, 1.0]))  # type: ignore[arg-type]


@pytest.mark.unit
class TestDualFunction:
    """Tests for α∨."""

    @staticmethod
    def test_quadratic_closed_form():
        res = _minkowski().dual_value([-2.0, 1.0, 0.0])
        assert res.method is DualMethod.CLOSED_FORM
        assert res.value == pytest.approx(np.sqrt(3.0))
        assert res.attained and res.unique
        assert np.allclose(res.maximizer, np.array([2.0, 1.0, 0.0]) / np.sqrt(3.0))

    @staticmethod
    def test_quadratic_dual_vanishes_on_dual_boundary():
        res = _minkowski().dual_value([-1.0, 1.0, 0.0])
        assert res.value == 0.0
        assert not res.attained

    @staticmethod
    def test_outside_dual_cone_is_neg_inf():
        res = _minkowski().dual_value([1.0, 0.0, 0.0])
        assert res.value is NEG_INF
        assert not res.finite
        assert res.as_float() == float("-inf")

    @staticmethod
    def test_annihilator_has_zero_dual(heisenberg_quadratic):
        res = heisenberg_quadratic.antinorm.dual_value([0.0, 0.0, 1.0])
        assert res.value == 0.0
        assert res.attained
        assert not res.unique

    @staticmethod
    def test_harmonic_closed_form(rng):
        alpha = _quadrant_harmonic()
        for _ in range(20):
            h1, h2 = -rng.uniform(0.1, 5.0, size=2)
            h3 = rng.normal()
            res = alpha.dual_value([h1, h2, h3])
            assert res.value == pytest.approx((np.sqrt(-h1) + np.sqrt(-h2)) ** 2)

    @staticmethod
    def test_harmonic_maximizer_lies_on_unit_antisphere():
        alpha = _quadrant_harmonic()
        res = alpha.dual_value([-1.0, -4.0, 0.0])
        assert res.value == pytest.approx(9.0)
        assert np.allclose(res.maximizer, [3.0, 1.5, 0.0])
        assert alpha.eval(res.maximizer) == pytest.approx(1.0)

    @staticmethod
    def test_harmonic_on_dual_boundary_is_not_attained():
        res = _quadrant_harmonic().dual_value([0.0, -2.0, 1.0])
        assert res.value == pytest.approx(2.0)
        assert not res.attained

    @staticmethod
    def test_numeric_oracle_agrees_with_closed_forms():
        assert numeric_dual(_quadrant_harmonic(), np.array([-1.0, -4.0, 0.0])).value == pytest.approx(9.0, rel=1e-6)
        assert numeric_dual(_minkowski(), np.array([-2.0, 1.0, 0.0])).value == pytest.approx(np.sqrt(3.0), rel=1e-6)

    @staticmethod
    def test_hybrid_numeric_dual(plane_hybrid):
        res = plane_hybrid.antinorm.dual_value([0.0, -1.0])
        assert res.method is DualMethod.NUMERIC
        assert res.value == pytest.approx(1.0, abs=1e-6)
        assert np.allclose(res.maximizer, [0.0, 1.0], atol=1e-6)
        assert plane_hybrid.antinorm.eval(res.maximizer) == pytest.approx(1.0, abs=1e-8)
        assert float(np.dot([0.0, -1.0], res.maximizer)) == pytest.approx(-res.value, abs=1e-8)

    @staticmethod
    def test_piecewise_linear_lp():
        cone = PolyhedralCone([[1.0, 0.0], [0.0, 1.0]])
        alpha = PiecewiseLinearAntinorm(cone, [[1.0, 0.0], [0.0, 1.0]])
        assert alpha.eval([2.0, 5.0]) == pytest.approx(2.0)
        res = alpha.dual_value([-1.0, -2.0])
        assert res.method is DualMethod.CLOSED_FORM
        assert res.value == pytest.approx(3.0)
        assert np.allclose(res.maximizer, [1.0, 1.0])

    @staticmethod
    def test_piecewise_linear_rejects_negative_functional():
        cone = PolyhedralCone([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(ConstructionError):
            PiecewiseLinearAntinorm(cone, [[1.0, -1.0]])


@pytest.mark.unit
class TestMaximizerSets:
    """Tests for p∨_r."""

    @staticmethod
    def test_unique_point_scales_with_level():
        mset = maximizer_set(_minkowski(), [-2.0, 1.0, 0.0], 2.0)
        assert mset.shape == "point"
        assert mset.unique
        assert np.allclose(mset.points[0], 2.0 * np.array([2.0, 1.0, 0.0]) / np.sqrt(3.0))

    @staticmethod
    def test_level_zero_is_exposed_ray():
        mset = maximizer_set(_minkowski(), [-1.0, 1.0, 0.0], 0.0)
        assert mset.shape == "ray"
        assert np.allclose(mset.points[0], np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0))

    @staticmethod
    def test_not_attained_is_empty():
        mset = maximizer_set(_minkowski(), [-1.0, 1.0, 0.0], 1.0)
        assert mset.shape == "empty"
        assert len(mset.points) == 0

    @staticmethod
    def test_hybrid_linear_face_is_a_segment(plane_hybrid):
        mset = maximizer_set(plane_hybrid.antinorm, [1.0, -1.0], 1.0)
        assert not mset.unique
        assert mset.shape == "segment"
        assert mset.convex
        assert np.allclose(mset.points[:, 1] - mset.points[:, 0], 1.0, rtol=0.0, atol=1e-8)

    @staticmethod
    def test_outside_dual_cone_raises():
        with pytest.raises(EmptyDomainError):
            maximizer_set(_minkowski(), [1.0, 0.0, 0.0])

    @staticmethod
    def test_negative_level_rejected():
        with pytest.raises(ValueError):
            maximizer_set(_minkowski(), [-2.0, 1.0, 0.0], -1.0)

    @staticmethod
    def test_describe_dual():
        record, mset = describe_dual(_minkowski(), np.array([-2.0, 1.0, 0.0]), r=1.0)
        assert record.value == pytest.approx(np.sqrt(3.0))
        assert record.method == "closed_form"
        assert mset is not None and mset.shape == "point"

    @staticmethod
    def test_describe_dual_outside():
        record, mset = describe_dual(_minkowski(), np.array([1.0, 0.0, 0.0]), r=1.0)
        assert record.value == "-inf"
        assert mset is None


@pytest.mark.unit
class TestAxioms:
    """Tests for the randomized axiom check."""

    @staticmethod
    @pytest.mark.parametrize(
        "name",
        ["minkowski", "plane_hybrid", "heisenberg_harmonic", "heisenberg_quadratic"],
    )
    def test_builtin_antinorms_satisfy_axioms(name, request):
        report = check_axioms(request.getfixturevalue(name).antinorm, samples=500)
        assert report.axioms_hold, report.violations
        assert report.violations == []

    @staticmethod
    def test_too_few_samples():
        with pytest.raises(ValueError):
            check_axioms(_minkowski(), samples=50)

    @staticmethod
    def test_quadratic_dual_is_an_antinorm():
        report = check_axioms(_minkowski(), samples=500)
        assert report.dual_is_antinorm
        assert report.max_dual_on_boundary <= 1e-8

    @staticmethod
    @pytest.mark.parametrize("name", ["plane_hybrid", "heisenberg_harmonic"])
    def test_sector_duals_are_not(name, request):
        report = check_axioms(request.getfixturevalue(name).antinorm, samples=500)
        assert not report.dual_is_antinorm
        assert report.max_dual_on_boundary > 0.5

    @staticmethod
    def test_broken_superadditivity_is_reported():
        class Convex(QuadraticAntinorm):
            def _values(self, points):
                return np.abs(points[:, 0]) + np.linalg.norm(points[:, 1:], axis=1)

        report = check_axioms(Convex(LorentzCone(3, [0, 1, 2])), samples=500)
        assert not report.axioms_hold


@pytest.mark.unit
class TestBoundaryLinearity:
    """Tests for the boundary-linearity search."""

    @staticmethod
    def test_hybrid_witness(plane_hybrid):
        witness = boundary_linearity(plane_hybrid.antinorm)
        assert witness is not None
        assert np.allclose(witness, [1.0, -1.0], atol=1e-6)
        assert plane_hybrid.antinorm.dual_value(witness).value == pytest.approx(1.0, abs=1e-6)

    @staticmethod
    def test_quadratic_has_no_witness():
        assert boundary_linearity(_minkowski(), search_resolution=64) is None

    @staticmethod
    def test_resolution_must_be_positive():
        with pytest.raises(ValueError):
            boundary_linearity(_minkowski(), search_resolution=0)

    @staticmethod
    def test_antinorm_is_additive_on_the_witness_face(plane_hybrid, rng):
        defect = additivity_defect(plane_hybrid.antinorm, np.array([1.0, -1.0]), rng)
        assert defect is not None
        assert defect < 1e-8


@pytest.mark.unit
class TestAntinormSchemas:
    """Tests for antinorm configuration."""

    @staticmethod
    def test_discriminated_union():
        cfg = TypeAdapter(AntinormConfig).validate_python({"kind": "harmonic"})
        assert isinstance(cfg, HarmonicAntinormConfig)

    @staticmethod
    def test_build_checks_cone_kind():
        with pytest.raises(ConstructionError):
            QuadraticAntinormConfig().build(SectorCone([1.0, 1.0], [-1.0, 1.0]))
