"""Gamma algebra, complexified four-vectors and spinor-matrix helpers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from seacausal import spinor

MACH_TOL = 1e-14

four_vectors = arrays(np.float64, (4,),
                      elements=st.floats(min_value=-10.0, max_value=10.0))


class TestGammaAlgebra:
    def test_anticommutators(self):
        for i in range(4):
            for j in range(4):
                anti = (spinor.GAMMA[i] @ spinor.GAMMA[j]
                        + spinor.GAMMA[j] @ spinor.GAMMA[i])
                want = 2.0 * spinor.METRIC[i, j] * np.eye(4)
                assert np.max(np.abs(anti - want)) <= MACH_TOL

    def test_signature_vector_is_gamma0_diagonal(self):
        assert np.array_equal(np.real(np.diag(spinor.GAMMA0)),
                              spinor.SIGNATURE)

    def test_gamma0_spectral_norm(self):
        assert spinor.spectral_norm(spinor.GAMMA0) == pytest.approx(1.0)


class TestComplexify:
    def test_examples(self):
        v = spinor.complexify(np.array([1.0, 0, 0, 0]), 0.1)
        assert np.allclose(v, [1.0 + 0.1j, 0, 0, 0])
        v = spinor.complexify(np.zeros(4), 1.0)
        assert np.allclose(v, [1j, 0, 0, 0])
        v = spinor.complexify(np.array([2.0, 1.0, -1.0, 0.0]), 0.5)
        assert np.allclose(v, [2.0 + 0.5j, 1.0, -1.0, 0.0])

    def test_nonpositive_eps_rejected(self):
        with pytest.raises(ValueError):
            spinor.complexify(np.zeros(4), 0.0)

    def test_neg_square_examples(self):
        z = spinor.neg_minkowski_square(spinor.complexify(np.zeros(4), 1.0))
        assert z == pytest.approx(1.0)
        z = spinor.neg_minkowski_square(
            spinor.complexify(np.array([1.0, 0, 0, 0]), 0.1))
        assert z == pytest.approx(-0.99 - 0.2j)
        z = spinor.neg_minkowski_square(
            spinor.complexify(np.array([0.0, 2.0, 0, 0]), 0.1))
        assert z == pytest.approx(4.01)

    @settings(max_examples=200, deadline=None)
    @given(xi=four_vectors, eps=st.floats(min_value=1e-3, max_value=2.0))
    def test_neg_square_avoids_excluded_ray(self, xi, eps):
        z = spinor.neg_minkowski_square(spinor.complexify(xi, eps))
        assert not (z.imag == 0 and z.real <= 0)


class TestSlash:
    def test_basis_vectors(self):
        assert np.allclose(spinor.slash([1, 0, 0, 0]), spinor.GAMMA0)
        assert np.allclose(spinor.slash([0, 0, 0, 1]), -spinor.GAMMA[3])

    @settings(max_examples=200, deadline=None)
    @given(v=four_vectors)
    def test_clifford_square(self, v):
        sq = spinor.slash(v) @ spinor.slash(v)
        vv = spinor.minkowski_dot(v, v)
        assert np.max(np.abs(sq - vv * np.eye(4))) <= 1e-10 * (1 + abs(vv))


class TestSpinAdjoint:
    def test_fixed_points(self):
        assert np.allclose(spinor.spin_adjoint(np.eye(4)), np.eye(4))
        assert np.allclose(spinor.spin_adjoint(spinor.GAMMA0), spinor.GAMMA0)

    def test_involution_and_product_rule(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            assert np.allclose(spinor.spin_adjoint(spinor.spin_adjoint(a)), a)
            assert np.allclose(spinor.spin_adjoint(a @ b),
                               spinor.spin_adjoint(b) @ spinor.spin_adjoint(a))

    def test_compatible_with_spin_product(self):
        rng = np.random.default_rng(4)
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        a = rng.normal(size=4) + 1j * rng.normal(size=4)
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        # <a | M b> = <M* a | b> with the indefinite product
        lhs = spinor.spin_product(a, m @ b)
        rhs = spinor.spin_product(spinor.spin_adjoint(m) @ a, b)
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestSpectralNorm:
    def test_examples(self):
        assert spinor.spectral_norm(np.eye(4)) == pytest.approx(1.0)
        assert spinor.spectral_norm(np.diag([3.0, -1.0, 0.0, 0.0])) \
            == pytest.approx(3.0)

    def test_matches_svd(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            assert spinor.spectral_norm(m) == pytest.approx(
                np.linalg.norm(m, 2), rel=1e-12)
