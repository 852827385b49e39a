"""Unit tests for structure constants, brackets and the conjugate subsystem.

Tests for:
- Bracket construction from 1-based triples
- Antisymmetry and Jacobi validation
- poisson_rhs on the Heisenberg and free Carnot algebras
- Algebra config schemas
"""

import numpy as np
import pytest
from pydantic import ValidationError

from app.exceptions import ConstructionError, DimensionMismatchError, InvalidAlgebraError
from app.lie.algebra import (
    LieAlgebraSpec,
    bracket,
    free_carnot_r2s4,
    heisenberg,
    poisson_rhs,
    validate,
)
from app.lie.schemas import BracketAlgebraConfig, NamedAlgebraConfig, build_algebra


def _broken_jacobi() -> LieAlgebraSpec:
    return LieAlgebraSpec.from_brackets(3, [(1, 2, 3, 1.0), (2, 3, 1, 1.0), (3, 1, 3, 1.0)])


@pytest.mark.unit
class TestBrackets:
    """Tests for bracket construction."""

    @staticmethod
    def test_heisenberg_bracket():
        a = heisenberg()
        e1, e2, e3 = np.eye(3)
        assert np.allclose(bracket(a, e1, e2), e3)
        assert np.allclose(bracket(a, e2, e1), -e3)
        assert np.allclose(bracket(a, e1, e3), 0.0)

    @staticmethod
    def test_bracket_is_bilinear():
        a = free_carnot_r2s4()
        rng = np.random.default_rng(1)
        u, v, w = rng.standard_normal((3, 8))
        assert np.allclose(bracket(a, 2 * u + w, v), 2 * bracket(a, u, v) + bracket(a, w, v))

    @staticmethod
    def test_default_labels():
        assert heisenberg().basis_labels == ("e1", "e2", "e3")
        assert free_carnot_r2s4().basis_labels[5] == "X6"
        assert LieAlgebraSpec.abelian(2).basis_labels == ("e1", "e2")

    @staticmethod
    def test_out_of_range_index_rejected():
        with pytest.raises(ConstructionError):
            LieAlgebraSpec.from_brackets(3, [(1, 4, 3, 1.0)])

    @staticmethod
    def test_conflicting_triples_rejected():
        with pytest.raises(ConstructionError):
            LieAlgebraSpec.from_brackets(3, [(1, 2, 3, 1.0), (2, 1, 3, 1.0)])

    @staticmethod
    def test_self_bracket_must_vanish():
        with pytest.raises(ConstructionError):
            LieAlgebraSpec.from_brackets(3, [(2, 2, 3, 1.0)])

    @staticmethod
    def test_wrong_vector_length():
        with pytest.raises(DimensionMismatchError):
            bracket(heisenberg(), [1.0, 0.0], [0.0, 1.0, 0.0])

    @staticmethod
    def test_nilpotency_step():
        assert LieAlgebraSpec.abelian(3).nilpotency_step == 1
        assert heisenberg().nilpotency_step == 2
        assert free_carnot_r2s4().nilpotency_step == 4
        assert _broken_jacobi().nilpotency_step is None


@pytest.mark.unit
class TestValidate:
    """Tests for antisymmetry and Jacobi checks."""

    @staticmethod
    @pytest.mark.parametrize("factory", [heisenberg, free_carnot_r2s4, lambda: LieAlgebraSpec.abelian(4)])
    def test_builtins_are_valid(factory):
        assert validate(factory()) == []

    @staticmethod
    def test_jacobi_violation_reported():
        violations = validate(_broken_jacobi())
        assert violations
        assert {v.kind for v in violations} == {"jacobi"}
        assert all(len(v.indices) == 4 for v in violations)

    @staticmethod
    def test_antisymmetry_violation_reported():
        c = np.zeros((3, 3, 3))
        c[2, 0, 1] = 1.0
        violations = validate(LieAlgebraSpec(c))
        assert [v.kind for v in violations] == ["antisymmetry"]
        assert violations[0].indices == (3, 1, 2)
        assert violations[0].residual == 1.0


@pytest.mark.unit
class TestPoissonRhs:
    """Tests for the conjugate subsystem."""

    @staticmethod
    def test_heisenberg():
        # dh1 = -u2 h3, dh2 = u1 h3, dh3 = 0
        out = poisson_rhs(heisenberg(), [1.0, 2.0, 3.0], [1.0, 1.0, 0.0])
        assert np.allclose(out, [-3.0, 3.0, 0.0])

    @staticmethod
    def test_abelian_is_static():
        a = LieAlgebraSpec.abelian(3)
        assert np.allclose(poisson_rhs(a, [1.0, -2.0, 0.5], [1.0, 0.0, 0.3]), 0.0)

    @staticmethod
    @pytest.mark.parametrize("u", [(1.0, 0.0), (0.0, 1.0), (0.7, -0.4)])
    def test_carnot_system(u):
        a = free_carnot_r2s4()
        h = np.random.default_rng(7).standard_normal(8)
        u1, u2 = u
        expected = np.array(
            [
                -u2 * h[2],
                u1 * h[2],
                u1 * h[3] + u2 * h[4],
                u1 * h[5] + u2 * h[6],
                u1 * h[6] + u2 * h[7],
                0.0,
                0.0,
                0.0,
            ]
        )
        control = np.zeros(8)
        control[:2] = u
        assert np.allclose(poisson_rhs(a, h, control), expected)


@pytest.mark.unit
class TestAlgebraSchemas:
    """Tests for algebra configuration."""

    @staticmethod
    def test_bracket_config_builds_heisenberg():
        cfg = BracketAlgebraConfig(dim=3, brackets=[(1, 2, 3, 1.0)])
        a = build_algebra(cfg)
        assert np.array_equal(a.structure_constants, heisenberg().structure_constants)

    @staticmethod
    def test_bracket_config_rejects_zero_index():
        with pytest.raises(ValidationError):
            BracketAlgebraConfig(dim=3, brackets=[(0, 2, 3, 1.0)])

    @staticmethod
    def test_bracket_config_label_count():
        with pytest.raises(ValidationError):
            BracketAlgebraConfig(dim=3, brackets=[], labels=["x", "y"])

    @staticmethod
    def test_build_algebra_rejects_jacobi_failure():
        cfg = BracketAlgebraConfig(dim=3, brackets=[(1, 2, 3, 1.0), (2, 3, 1, 1.0), (3, 1, 3, 1.0)])
        with pytest.raises(InvalidAlgebraError):
            build_algebra(cfg)

    @staticmethod
    def test_named_config():
        assert build_algebra(NamedAlgebraConfig(name="carnot_r2s4")).dim == 8
        assert build_algebra(NamedAlgebraConfig(name="abelian", dim=5)).dim == 5
        with pytest.raises(ValueError):
            NamedAlgebraConfig(name="abelian").build()
