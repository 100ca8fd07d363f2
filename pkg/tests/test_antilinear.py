import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_complex
from nonherm.antilinear import (
    AntilinearOp,
    adjoint,
    anti_adjoint_product_rule_check,
    antilinear_fixes_basis_but_not_identity,
    apply,
    compose_aa,
    compose_al,
    compose_la,
    conjugation,
    rank_one_selfadjoint_example,
    v_squared_orthogonality_check,
)
from nonherm.errors import DimensionError, NormalizationError, NotEigenpairError, NotFixedError
from nonherm.numerics import scalar_product
from nonherm.two_level import TwoLevelParams, closed_form_eigensystem

finite = st.floats(-10, 10, allow_nan=False)
complexes = st.builds(complex, finite, finite)


def random_op(rng, n):
    return AntilinearOp(random_complex(rng, n, n))


class TestApply:
    def test_conjugation(self):
        np.testing.assert_array_equal(apply(conjugation(2), [1j, 1]), [-1j, 1])

    def test_zero_vector(self, rng):
        np.testing.assert_array_equal(apply(random_op(rng, 3), np.zeros(3)), np.zeros(3))

    def test_swap(self):
        v = AntilinearOp([[0, 1], [1, 0]])
        np.testing.assert_array_equal(v([1 + 1j, 2]), [2, 1 - 1j])

    def test_dimension(self):
        with pytest.raises(DimensionError):
            apply(conjugation(2), [1, 2, 3])

    @given(complexes, st.lists(complexes, min_size=3, max_size=3))
    def test_antilinearity(self, a, f):
        v = AntilinearOp(np.arange(9).reshape(3, 3) * (1 + 0.5j))
        np.testing.assert_allclose(v(a * np.array(f)), np.conj(a) * v(f), atol=1e-9)

    def test_matrix_part_is_read_only(self):
        v = conjugation(2)
        with pytest.raises(ValueError):
            v.m[0, 0] = 2


class TestAdjoint:
    def test_conjugation_self_adjoint(self):
        v = conjugation(3)
        assert adjoint(v) == v and v.is_self_adjoint()

    def test_involution_exact(self, rng):
        v = random_op(rng, 4)
        np.testing.assert_array_equal(adjoint(adjoint(v)).m, v.m)

    def test_transpose_without_conjugation(self):
        v = AntilinearOp([[1, 2j], [3, 4]])
        np.testing.assert_array_equal(adjoint(v).m, [[1, 3], [2j, 4]])

    @pytest.mark.parametrize("n", [1, 2, 5, 8])
    def test_contract(self, rng, n):
        # <V^dagger phi, chi> = <V chi, phi>
        v = random_op(rng, n)
        vd = adjoint(v)
        for _ in range(100):
            phi, chi = random_complex(rng, n), random_complex(rng, n)
            lhs = scalar_product(vd(phi), chi)
            rhs = scalar_product(v(chi), phi)
            assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs))

    def test_rank_one_is_self_adjoint(self):
        psi = np.array([3.0, 4.0]) / 5
        v = rank_one_selfadjoint_example(psi, 1 + 2j)
        assert adjoint(v) == v

    def test_self_adjoint_iff_symmetric(self, rng):
        m = random_complex(rng, 3, 3)
        assert AntilinearOp(m + m.T).is_self_adjoint()
        assert not AntilinearOp(m - m.T).is_self_adjoint()
        hermitian = m + m.conj().T
        assert not AntilinearOp(hermitian).is_self_adjoint()


class TestComposition:
    def test_square_of_conjugation(self):
        np.testing.assert_array_equal(compose_aa(conjugation(2), conjugation(2)), np.eye(2))

    def test_phase(self):
        out = compose_aa(AntilinearOp(np.diag([1j, 1j])), conjugation(2))
        np.testing.assert_array_equal(out, np.diag([1j, 1j]))

    def test_pointwise(self, rng):
        v1, v2 = random_op(rng, 4), random_op(rng, 4)
        lin = compose_aa(v1, v2)
        assert isinstance(lin, np.ndarray)
        for _ in range(10):
            f = random_complex(rng, 4)
            np.testing.assert_allclose(lin @ f, v1(v2(f)), atol=1e-12)

    def test_square_pointwise(self, rng):
        v = random_op(rng, 5)
        f = random_complex(rng, 5)
        np.testing.assert_allclose(compose_aa(v, v) @ f, v(v(f)), atol=1e-12)

    def test_identity_either_side(self, rng):
        v = random_op(rng, 3)
        assert compose_la(np.eye(3), v) == v
        assert compose_al(v, np.eye(3)) == v

    def test_mixed_products(self, rng):
        h = random_complex(rng, 3, 3)
        v = conjugation(3)
        np.testing.assert_array_equal(compose_la(h, v).m, h)
        np.testing.assert_array_equal(compose_al(v, h).m, h.conj())
        w = random_op(rng, 3)
        f = random_complex(rng, 3)
        np.testing.assert_allclose(compose_la(h, w)(f), h @ w(f), atol=1e-12)
        np.testing.assert_allclose(compose_al(w, h)(f), w(h @ f), atol=1e-12)

    def test_dimension(self, rng):
        with pytest.raises(DimensionError):
            compose_aa(conjugation(2), conjugation(3))
        with pytest.raises(DimensionError):
            compose_la(np.eye(3), conjugation(2))


class TestProductRule:
    def test_conjugation(self):
        assert anti_adjoint_product_rule_check(conjugation(2), conjugation(2))

    def test_random(self, rng):
        for n in (2, 4, 7):
            assert anti_adjoint_product_rule_check(random_op(rng, n), random_op(rng, n))

    def test_rank_one_with_conjugation(self):
        v = rank_one_selfadjoint_example([0.6, 0.8j], 2 - 1j)
        assert anti_adjoint_product_rule_check(v, conjugation(2))


class TestFixesBasis:
    def test_canonical_basis(self):
        assert antilinear_fixes_basis_but_not_identity(np.eye(3).T, conjugation(3))

    def test_two_level_basis(self):
        phi1, phi2, _, _ = closed_form_eigensystem(TwoLevelParams(0.7, -1.3, 1 + 1j, 1 - 1j))
        assert antilinear_fixes_basis_but_not_identity([phi1, phi2], conjugation(2))

    def test_real_basis(self, rng):
        basis = list(rng.standard_normal((4, 4)))
        assert antilinear_fixes_basis_but_not_identity(basis, AntilinearOp(np.eye(4)))

    def test_not_fixed(self):
        with pytest.raises(NotFixedError):
            antilinear_fixes_basis_but_not_identity([[1j, 0], [0, 1]], conjugation(2))

    def test_not_spanning(self):
        with pytest.raises(NotFixedError):
            antilinear_fixes_basis_but_not_identity([[1, 0], [2, 0]], conjugation(2))


class TestRankOne:
    def test_hand_example(self):
        v = rank_one_selfadjoint_example([1, 0], 1j)
        np.testing.assert_array_equal(v.m, [[1j, 0], [0, 0]])
        np.testing.assert_array_equal(v([1, 0]), [1j, 0])

    @pytest.mark.parametrize("lam", [cmath.exp(1j * math.pi / 4), 2 - 3j, -0.5j])
    def test_scaled_eigenvector(self, lam):
        alpha = 0.3 + 1.7j
        psi = np.array([1, 1j, 1]) / math.sqrt(3)
        v = rank_one_selfadjoint_example(psi, alpha)
        expected = np.conj(lam) / lam * alpha
        np.testing.assert_allclose(v(lam * psi), expected * lam * psi, atol=1e-14)

    def test_phase_quarter_turn(self):
        alpha = 2 + 1j
        v = rank_one_selfadjoint_example([0, 1], alpha)
        z = cmath.exp(1j * math.pi / 4)
        np.testing.assert_allclose(v(z * np.array([0, 1])), -1j * alpha * z * np.array([0, 1]), atol=1e-15)

    def test_non_unit(self):
        with pytest.raises(NormalizationError):
            rank_one_selfadjoint_example([1, 1], 1j)

    def test_real_alpha(self):
        with pytest.raises(ValueError):
            rank_one_selfadjoint_example([1, 0], 2.0)


class TestOrthogonality:
    def test_diagonal(self):
        v = AntilinearOp(np.diag([1.0, 2.0]))
        report = v_squared_orthogonality_check(v, [([1, 0], 1), ([0, 1], 2)])
        assert report.ok
        assert report.pairs[0][2] is True
        np.testing.assert_allclose(compose_aa(v, v) @ [0, 1], [0, 4])

    def test_equal_moduli_overlap(self):
        alpha = 1 + 1j
        psi = np.array([1.0, 0.0])
        v = rank_one_selfadjoint_example(psi, alpha)
        z1, z2 = cmath.exp(1j * math.pi / 4), cmath.exp(1j * math.pi / 3)
        a1, a2 = -1j * alpha, -alpha / 2 * (1 + 1j * math.sqrt(3))
        report = v_squared_orthogonality_check(v, [(z1 * psi, a1), (z2 * psi, a2)])
        j, k, required, overlap, passed = report.pairs[0]
        assert not required and passed and report.ok
        assert abs(overlap - cmath.exp(1j * math.pi / 12)) < 1e-12

    def test_single_pair(self):
        report = v_squared_orthogonality_check(conjugation(2), [([1, 0], 1)])
        assert report.ok and report.pairs == []

    def test_not_an_eigenpair(self):
        with pytest.raises(NotEigenpairError):
            v_squared_orthogonality_check(conjugation(2), [([1j, 0], 1)])


class TestSerialization:
    def test_round_trip(self, rng):
        v = random_op(rng, 3)
        data = v.to_dict()
        assert data["antilinear"] is True
        w = AntilinearOp.from_dict(data)
        np.testing.assert_array_equal(w.m, v.m)

    def test_missing_tag(self):
        with pytest.raises(ValueError):
            AntilinearOp.from_dict({"matrix": [["1"]]})
