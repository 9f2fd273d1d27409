"""Closed chain eigenvalues, causal classification and the Lagrangian."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seacausal import chain
from seacausal.chain import (CausalClass, causal_classify, chain_invariants,
                             classify_invariants, closed_chain,
                             invariants_from_radial, lagrangian, mixed_chain)
from seacausal.kernel import RegKernelParams

EIG_REL_TOL = 1e-8
PARAMS = RegKernelParams(1.0, 0.1)


def eigensolver_pairs(mat):
    """Eigenvalues of a 4x4 matrix sorted for deterministic pairing."""
    ev = np.linalg.eigvals(mat)
    order = np.lexsort((-ev.imag, -ev.real, -np.abs(ev)))
    return ev[order]


class TestFrozenValues:
    def test_b_at_coincidence(self):
        # chain regularization 1.0: b = 4 |F(1)|^2 G(1)^2
        _, b = invariants_from_radial(0.0, 0.0, 1.0, 1.0)
        assert b == pytest.approx(1.0107e-9, rel=1e-3)

    def test_lagrangian_at_coincidence(self):
        val = lagrangian(np.zeros(4), np.zeros(4), RegKernelParams(1.0, 0.5))
        assert val == pytest.approx(4.0428e-9, rel=1e-3)

    def test_coincidence_is_timelike(self):
        assert causal_classify(np.zeros(4), np.zeros(4), PARAMS) \
            is CausalClass.Timelike

    def test_spacelike_displacement(self):
        y = np.array([0.0, 1.0, 0.0, 0.0])
        assert causal_classify(np.zeros(4), y, PARAMS) is CausalClass.Spacelike
        assert lagrangian(np.zeros(4), y, PARAMS) == 0.0

    def test_far_spacelike_falls_into_lightlike_band(self):
        # b underflows the classification band far out; the Lagrangian
        # still vanishes identically
        y = np.array([0.0, 5.0, 0.0, 0.0])
        assert causal_classify(np.zeros(4), y, PARAMS) is CausalClass.Lightlike
        assert lagrangian(np.zeros(4), y, PARAMS) == 0.0


class TestEigenvalueOracle:
    def test_multiplicity_two_pairs(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            x, y = rng.normal(size=4), rng.normal(size=4)
            inv = chain_invariants(x, y, PARAMS)
            ev = eigensolver_pairs(closed_chain(x, y, PARAMS))
            scale = max(np.max(np.abs(ev)), 1e-300)
            # each closed-form eigenvalue matches two solver eigenvalues
            for lam in (inv.lam_plus, inv.lam_minus):
                close = np.abs(ev - lam) <= EIG_REL_TOL * scale
                assert np.sum(close) >= 2

    def test_trace_identity(self):
        rng = np.random.default_rng(32)
        for _ in range(50):
            x, y = rng.normal(size=4), rng.normal(size=4)
            inv = chain_invariants(x, y, PARAMS)
            tr = np.trace(closed_chain(x, y, PARAMS))
            assert tr == pytest.approx(2.0 * (inv.lam_plus + inv.lam_minus),
                                       rel=1e-10, abs=1e-300)

    def test_chain_spin_self_adjoint(self):
        from seacausal import spinor
        rng = np.random.default_rng(33)
        for _ in range(20):
            x, y = rng.normal(size=4), rng.normal(size=4)
            a = closed_chain(x, y, PARAMS)
            assert np.max(np.abs(spinor.spin_adjoint(a) - a)) \
                <= 1e-12 * np.linalg.norm(a)


class TestInvariantProperties:
    @settings(max_examples=300, deadline=None)
    @given(t=st.floats(min_value=-8.0, max_value=8.0),
           r=st.floats(min_value=0.0, max_value=8.0),
           eps=st.floats(min_value=0.05, max_value=1.0))
    def test_a_square_dominates_b(self, t, r, eps):
        a, b = invariants_from_radial(t, r, eps, 1.0)
        assert a * a >= b - 1e-10 * (a * a + 1.0)

    @settings(max_examples=200, deadline=None)
    @given(t=st.floats(min_value=-5.0, max_value=5.0),
           r=st.floats(min_value=0.0, max_value=5.0))
    def test_lagrangian_identity_and_sign(self, t, r):
        a, b = invariants_from_radial(t, r, 0.2, 1.0)
        lam_p = a + np.sqrt(complex(b))
        lam_m = a - np.sqrt(complex(b))
        lag = 4.0 * max(b, 0.0)
        assert lag >= 0.0
        assert lag == pytest.approx((abs(lam_p) - abs(lam_m)) ** 2,
                                    rel=1e-8, abs=1e-30)

    def test_symmetry_in_arguments(self):
        rng = np.random.default_rng(34)
        for _ in range(20):
            x, y = rng.normal(size=4), rng.normal(size=4)
            assert lagrangian(x, y, PARAMS) == pytest.approx(
                lagrangian(y, x, PARAMS), rel=1e-12, abs=1e-300)

    def test_rotation_invariance_of_classification(self):
        xi = np.array([0.4, 0.7, 0.0, 0.0])
        rot = np.array([0.4, 0.0, 0.7, 0.0])  # same t, same |spatial part|
        assert causal_classify(xi, np.zeros(4), PARAMS) \
            is causal_classify(rot, np.zeros(4), PARAMS)

    def test_lightlike_band(self):
        assert classify_invariants(1.0, 0.0) is CausalClass.Lightlike
        assert classify_invariants(1.0, 1e-16) is CausalClass.Lightlike
        assert classify_invariants(1.0, 1e-3) is CausalClass.Timelike
        assert classify_invariants(1.0, -1e-3) is CausalClass.Spacelike


class TestMixedChain:
    def test_equal_regularizations_reduce(self):
        x = np.array([0.2, 0.1, -0.3, 0.0])
        y = np.array([-0.1, 0.2, 0.0, 0.4])
        mixed = mixed_chain(x, y, 0.1, 0.1, 1.0)
        plain = (2.0 * np.pi) ** 2 * closed_chain(x, y, PARAMS)
        assert np.allclose(mixed, plain, rtol=1e-14)

    def test_continuity_in_second_regularization(self):
        x = np.array([0.2, 0.1, -0.3, 0.0])
        y = np.array([-0.1, 0.2, 0.0, 0.4])
        base = mixed_chain(x, y, 0.1, 0.1, 1.0)
        devs = [np.max(np.abs(mixed_chain(x, y, 0.1, 0.1 + d, 1.0) - base))
                for d in (0.1, 0.01, 0.001)]
        assert devs[0] > devs[1] > devs[2]
        assert devs[2] <= 0.05 * np.max(np.abs(base))

    def test_positive_regularizations_required(self):
        with pytest.raises(ValueError):
            mixed_chain(np.zeros(4), np.zeros(4), 0.0, 0.1, 1.0)
        with pytest.raises(ValueError):
            mixed_chain(np.zeros(4), np.zeros(4), 0.1, -0.2, 1.0)
