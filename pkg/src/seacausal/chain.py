"""Closed chain, its eigenvalues, causal classification and Lagrangian.

The chain A_xy = P^{2eps}(x,y) P^{2eps}(y,x) has two eigenvalues
lambda_pm = a +- sqrt(b), each with multiplicity two.  b is assembled in
closed Bessel form (avoiding the cancellation of the matrix route, which
is kept as an oracle in the tests).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernel as kernel_mod
from . import spinor
from .kernel import RegKernelParams

# |b| below this multiple of (a^2 + 1) counts as the lightlike band
LIGHTLIKE_BAND = 1e-14


class CausalClass(Enum):
    Timelike = "T"
    Spacelike = "S"
    Lightlike = "L"


@dataclass(frozen=True)
class ChainInvariants:
    a: float
    b: float
    lam_plus: complex
    lam_minus: complex


def closed_chain(x, y, params: RegKernelParams) -> np.ndarray:
    doubled = RegKernelParams(params.m, 2.0 * params.eps)
    pxy = kernel_mod.kernel_p(x, y, doubled).matrix
    pyx = kernel_mod.kernel_p(y, x, doubled).matrix
    return pxy @ pyx


def invariants_from_radial(t, r, eps_chain: float, m: float):
    """(a, b) for displacement (t, r) at chain regularization eps_chain.

    Vectorized over t, r.  a and b are real by construction.
    """
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    e = eps_chain
    zeta = -((t + 1j * e) ** 2) + r * r            # -xi_eps^2
    f = kernel_mod.scalar_F(zeta, m)
    g = kernel_mod.scalar_G(zeta, m)
    f2 = np.abs(f) ** 2
    g2 = np.abs(g) ** 2
    dot_conj = t * t + e * e - r * r               # xi_eps . conj(xi_eps)
    a = f2 * dot_conj + g2
    b = (2.0 * np.real((f * np.conj(g)) ** 2 * (-zeta))
         + 2.0 * f2 * g2 * dot_conj
         - 4.0 * f2 * f2 * e * e * r * r)
    return a, b


def chain_invariants(x, y, params: RegKernelParams) -> ChainInvariants:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xi = x - y
    t = xi[0]
    r = float(np.linalg.norm(xi[1:]))
    a, b = invariants_from_radial(t, r, 2.0 * params.eps, params.m)
    a = float(a)
    b = float(b)
    root = np.sqrt(complex(b))
    return ChainInvariants(a=a, b=b, lam_plus=a + root, lam_minus=a - root)


def causal_classify(x, y, params: RegKernelParams) -> CausalClass:
    inv = chain_invariants(x, y, params)
    return classify_invariants(inv.a, inv.b)


def classify_invariants(a, b) -> CausalClass:
    if abs(b) <= LIGHTLIKE_BAND * (a * a + 1.0):
        return CausalClass.Lightlike
    return CausalClass.Timelike if b > 0 else CausalClass.Spacelike


def lagrangian(x, y, params: RegKernelParams) -> float:
    inv = chain_invariants(x, y, params)
    return 4.0 * max(inv.b, 0.0)


def lagrangian_from_radial(t, r, eps_chain: float, m: float):
    """Vectorized 4|b|_+ for the radial reduction of the integrals."""
    a, b = invariants_from_radial(t, r, eps_chain, m)
    return 4.0 * np.maximum(b, 0.0)


def mixed_chain(x, y, eps1: float, eps2: float, m: float) -> np.ndarray:
    """(2 pi)^2 P^{eps1+eps2}(x,y) P^{eps1+eps2}(y,x): the chain of the two
    local correlation operators F^{eps1}(x), F^{eps2}(y) carries the sum of
    the regularizations (validated against the Gram-matrix oracle)."""
    if eps1 <= 0 or eps2 <= 0:
        raise ValueError("regularizations must be positive")
    p = RegKernelParams(m, eps1 + eps2)
    pxy = kernel_mod.kernel_p(x, y, p).matrix
    pyx = kernel_mod.kernel_p(y, x, p).matrix
    return (2.0 * np.pi) ** 2 * (pxy @ pyx)
