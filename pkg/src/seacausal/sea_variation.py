"""Variation experiments on the regularized Dirac sea.

Local correlation operators F^eps(x) act on the (infinite-dimensional)
solution space, but every quantity needed here reduces to 4x4 and 8x8
matrices built from kernel evaluations, via the correlation identity

    2 pi <P^{eps1}(.,x) a | P^{eps2}(.,y) b>  =  -<a | P^{eps1+eps2}(x,y) b>_spin.

Provided: mixed correlations, the Gram block of the joint frame at a
point, operator-norm distances ||F^{eps1}(x) - F^{eps2}(x)||, the
regularization-rescaling sweep with its Hoelder fit, and L1 norms of the
time-zero frame data.
"""

from __future__ import annotations

import numpy as np

from . import chain, gk, kernel, quadrature, spinor
from .kernel import RegKernelParams

TWO_PI = 2.0 * np.pi


def _p_matrix(x, y, eps: float, m: float) -> np.ndarray:
    return kernel.kernel_p(x, y, RegKernelParams(m, eps)).matrix


def mixed_correlation(x, y, eps1: float, eps2: float, a, b, m: float) -> complex:
    """<P^{eps1}(.,x) a | P^{eps2}(.,y) b> = -(1/2pi) <a|P^{eps1+eps2}(x,y) b>_spin."""
    if eps1 <= 0 or eps2 <= 0:
        raise ValueError("regularizations must be positive")
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    p = _p_matrix(x, y, eps1 + eps2, m)
    return complex(-(1.0 / TWO_PI) * spinor.spin_product(a, p @ b))


def gram_block(x, eps1: float, eps2: float, m: float) -> np.ndarray:
    """8x8 Gram matrix of {P^{eps1}(.,x) e_mu} u {P^{eps2}(.,x) e_mu};
    positive semidefinite."""
    g = np.empty((8, 8), dtype=complex)
    eps = (eps1, eps2)
    for i in range(2):
        for j in range(2):
            a_ij = _p_matrix(x, x, eps[i] + eps[j], m)
            g[4 * i:4 * i + 4, 4 * j:4 * j + 4] = \
                -(1.0 / TWO_PI) * spinor.GAMMA0 @ a_ij
    g = 0.5 * (g + g.conj().T)
    ev = np.linalg.eigvalsh(g)
    if ev.min() < -1e-10 * max(np.trace(g).real, 1.0):
        raise RuntimeError("Gram matrix indefinite: inner-product bug")
    return g


def op_norm_difference(x, eps1: float, eps2: float, m: float) -> float:
    """||F^{eps1}(x) - F^{eps2}(x)|| on the solution space.

    The difference D = -R_1^* R_1 + R_2^* R_2 with the pointwise
    evaluation maps R_i = R_{eps_i}(x): H -> C^4 has the same nonzero
    spectrum as the 8x8 matrix diag(-1, 1) (R_i R_j^*), and
    R_i R_j^* = -2 pi P^{eps_i+eps_j}(x,x).  D is self-adjoint, so its
    norm is the largest absolute eigenvalue of that matrix.
    """
    if eps1 <= 0 or eps2 <= 0:
        raise ValueError("regularizations must be positive")
    x = np.asarray(x, dtype=float)
    eps = (eps1, eps2)
    c = np.empty((8, 8), dtype=complex)
    for i in range(2):
        for j in range(2):
            a_ij = _p_matrix(x, x, eps[i] + eps[j], m)
            sign = 1.0 if i == 0 else -1.0
            c[4 * i:4 * i + 4, 4 * j:4 * j + 4] = sign * TWO_PI * a_ij
    ev = np.linalg.eigvals(c)
    return float(np.max(np.abs(ev.real)))


def product_coefficient_matrix(x, y, eps1: float, eps2: float,
                               m: float) -> np.ndarray:
    """Coefficient matrix of F^{eps1}(x) F^{eps2}(y) on the joint family
    {P^{eps1}(.,x) e_mu} u {P^{eps2}(.,y) e_mu}.

    Its nonzero eigenvalues are those of the product operator; used as an
    independent check of the mixed-chain reduction.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    base = ((eps1, x), (eps2, y))

    def coeff(op_eps, op_pt):
        # F^{op_eps}(op_pt) u_{j nu} = 2 pi P^{op_eps}(., op_pt)
        #     [P^{op_eps + eps_j}(op_pt, z_j) e_nu]
        row = np.zeros((4, 8), dtype=complex)
        for j, (ej, zj) in enumerate(base):
            row[:, 4 * j:4 * j + 4] = TWO_PI * _p_matrix(op_pt, zj,
                                                         op_eps + ej, m)
        return row

    m1 = np.zeros((8, 8), dtype=complex)
    m1[0:4, :] = coeff(eps1, x)
    m2 = np.zeros((8, 8), dtype=complex)
    m2[4:8, :] = coeff(eps2, y)
    return m1 @ m2


def holder_sweep(lam_list, params: RegKernelParams, tol: float = 0.005,
                 lam_region: float = 0.85):
    """Rows (lambda, dF_norm, dEll, ell_value, alpha_fit_running) for the
    regularization-rescaling variation, plus the final log-log fit.

    Returns (rows, fit) with fit = {alpha, intercept, r2}.
    """
    x0 = np.zeros(4)
    base = quadrature.integrate_lagrangian(params, tol=tol, lam=lam_region)
    rows = []
    log_df, log_dl = [], []
    for lam in lam_list:
        if params.eps + lam <= 0:
            raise ValueError("eps + lambda must stay positive")
        if lam == 0.0:
            rows.append((0.0, 0.0, 0.0, base.value, np.nan))
            continue
        df = op_norm_difference(x0, params.eps + lam, params.eps, params.m)
        rep = quadrature.ell_varied(lam, params, tol=tol, lam=lam_region)
        dl = abs(rep.value - base.value)
        if df > 0 and dl > 0:
            log_df.append(np.log(df))
            log_dl.append(np.log(dl))
        alpha_run = np.nan
        if len(log_df) >= 2:
            alpha_run = float(np.polyfit(log_df, log_dl, 1)[0])
        rows.append((lam, df, dl, rep.value, alpha_run))
    fit = {"alpha": np.nan, "intercept": np.nan, "r2": np.nan}
    if len(log_df) >= 2:
        coef = np.polyfit(log_df, log_dl, 1)
        pred = np.polyval(coef, log_df)
        resid = np.asarray(log_dl) - pred
        ss_tot = float(np.sum((log_dl - np.mean(log_dl)) ** 2))
        r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
        fit = {"alpha": float(coef[0]), "intercept": float(coef[1]),
               "r2": r2}
    return rows, fit


def l1_frame_norms(params: RegKernelParams, radius: float = 60.0,
                   tol: float = 1e-4, max_panels: int = 6000,
                   normalized: bool = True) -> np.ndarray:
    """L1(R^3) norms of the time-zero data of the four normalized frame
    vectors (2 pi / sqrt|nu_mu|) P^eps((0,.), 0) e_mu.

    With normalized=False the raw kernel columns are integrated instead
    (their L1 norms grow as eps decreases; the unit-norm frame vectors
    concentrate, so their L1 norms shrink).

    The integrand is azimuthally symmetric, so a 2-D (r, theta)
    quadrature with weight 2 pi r^2 sin(theta) suffices.
    """
    nm, np_ = kernel.nu_pm(params)
    nus = np.array([nm, nm, np_, np_])

    def integrand(r, th):
        ct, st = np.cos(th), np.sin(th)
        xi = np.zeros(r.shape + (4,))
        xi[..., 1] = r * st
        xi[..., 3] = r * ct
        mats = kernel.kernel_matrix_batch(xi, params)
        colnorm = np.linalg.norm(mats, axis=-2)         # per column mu
        w = 2.0 * np.pi * r * r * st
        return w[:, None] * colnorm

    vest, _, _ = gk.integrate_2d(integrand, (0.0, radius, 0.0, np.pi),
                                 tol_abs=0.0, max_panels=64)
    scale = float(np.max(np.abs(vest)))
    v, err, _ = gk.integrate_2d(integrand, (0.0, radius, 0.0, np.pi),
                                tol_abs=tol * scale, max_panels=max_panels)
    if err > 10.0 * tol * scale:
        raise quadrature.QuadratureError("L1 frame-norm quadrature did not "
                                         "converge")
    if not normalized:
        return np.real(v)
    return np.real(v) * (TWO_PI / np.sqrt(np.abs(nus)))
