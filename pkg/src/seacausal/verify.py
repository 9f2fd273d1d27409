"""Property suites: implementation-vs-oracle checks runnable from the CLI.

Each suite function returns a list of (check_name, passed, detail)
triples.  Oracles are independent evaluation routes: integral
representations, finite differences, momentum-space quadrature, generic
eigensolvers, Gram-matrix spectra, and Monte-Carlo sampling.
"""

from __future__ import annotations

import numpy as np

from . import (abstract_cfs, bessel, chain, em_perturb, gk, kernel,
               quadrature, sea_variation, spinor)
from .kernel import RegKernelParams


def _sample_cut_plane(rng, n, r_lo=1e-3, r_hi=60.0, arg_frac=0.999):
    mod = np.exp(rng.uniform(np.log(r_lo), np.log(r_hi), n))
    arg = rng.uniform(-arg_frac * np.pi, arg_frac * np.pi, n)
    return mod * np.exp(1j * arg)


def _k_integral_oracle(n, x):
    """K_n(x) = int_0^inf e^{-x cosh t} cosh(n t) dt for real x > 0."""
    t_max = float(np.arccosh(700.0 / x)) if x < 700.0 else 1.0

    def f(t):
        return np.exp(-x * np.cosh(t)) * np.cosh(n * t)

    # absolute tolerance scaled to the K magnitude ~ sqrt(pi/2x) e^{-x}
    tol = 1e-13 * np.sqrt(np.pi / (2.0 * x)) * np.exp(-x)
    val, _, _ = gk.integrate_1d(f, 0.0, t_max, tol, 4000)
    return float(np.real(val))


def suite_bessel(seed=12345):
    rng = np.random.default_rng(seed)
    out = []
    z = _sample_cut_plane(rng, 1000)
    k0 = bessel.bessel_k(0, z)
    k1 = bessel.bessel_k(1, z)
    k2 = bessel.bessel_k(2, z)
    rec = np.max(np.abs(k2 - (k0 + 2.0 / z * k1)) / np.abs(k2))
    out.append(("recurrence_k2", rec <= 1e-10, "max rel %.2e" % rec))

    dk = bessel.bessel_k_derivative(1, z)
    h = 1e-6 * np.abs(z)
    fd = (bessel.bessel_k(1, z + h) - bessel.bessel_k(1, z - h)) / (2.0 * h)
    dev = np.max(np.abs(dk - fd) / np.abs(dk))
    out.append(("derivative_identity_fd", dev <= 1e-6,
                "max rel %.2e (fd step limited)" % dev))

    xs = np.exp(np.linspace(np.log(0.1), np.log(30.0), 20))
    worst = 0.0
    for x in xs:
        for n in (0, 1, 2):
            ref = _k_integral_oracle(n, float(x))
            got = float(np.real(bessel.bessel_k(n, complex(x))))
            worst = max(worst, abs(got - ref) / abs(ref))
    out.append(("integral_representation", worst <= 1e-10,
                "max rel %.2e" % worst))

    zz = _sample_cut_plane(rng, 400, r_lo=20.0, r_hi=200.0, arg_frac=0.5)
    env = np.abs(bessel.bessel_k(1, zz) * np.sqrt(2.0 * zz / np.pi)
                 * np.exp(zz) - 1.0)
    out.append(("asymptotic_envelope", float(np.max(env)) <= 0.05,
                "max dev %.3f" % float(np.max(env))))

    zs = _sample_cut_plane(rng, 400, r_lo=1e-6, r_hi=1e-3)
    d1 = np.max(np.abs(bessel.bessel_k(1, zs) * zs - 1.0))
    d0 = np.max(np.abs(bessel.bessel_k(0, zs)
                       / (-(np.log(zs / 2.0) + bessel.EULER_GAMMA)) - 1.0))
    d2 = np.max(np.abs(bessel.bessel_k(2, zs) * zs * zs / 2.0 - 1.0))
    small_ok = max(d1, d0, d2) <= 1e-3
    out.append(("small_z_laws", bool(small_ok),
                "K1 %.1e K0 %.1e K2 %.1e" % (d1, d0, d2)))
    return out


def suite_kernel(seed=12345):
    rng = np.random.default_rng(seed)
    out = []
    worst = 0.0
    for _ in range(20):
        eps = rng.uniform(0.1, 0.3)
        p = RegKernelParams(1.0, eps)
        x = rng.uniform(-1.5, 1.5, 4)
        y = rng.uniform(-1.5, 1.5, 4)
        closed = kernel.kernel_p(x, y, p).matrix
        mom, _ = kernel.kernel_p_momentum_oracle(x, y, p, tol=1e-10)
        worst = max(worst, float(np.max(np.abs(closed - mom))))
    out.append(("momentum_oracle", worst <= 1e-6, "max abs %.2e" % worst))

    # vector part v^j = (i/m) d^j beta, beta = scalar part of the kernel
    p = RegKernelParams(1.0, 0.15)
    worst = 0.0
    for _ in range(10):
        xi = rng.uniform(-1.0, 1.0, 4)
        kv = kernel.kernel_p(xi, np.zeros(4), p)
        v = kv.f * kv.xi_eps
        h = 1e-5
        for j in range(4):
            e = np.zeros(4)
            e[j] = h
            gp_ = kernel.kernel_p(xi + e, np.zeros(4), p).g
            gm_ = kernel.kernel_p(xi - e, np.zeros(4), p).g
            d_j = (gp_ - gm_) / (2.0 * h)
            d_up = d_j if j == 0 else -d_j
            fd = (1j / p.m) * d_up
            worst = max(worst, abs(fd - v[j]) / max(abs(v[j]), 1e-12))
    out.append(("vector_gradient_identity", worst <= 1e-5,
                "max rel %.2e" % worst))

    # Dirac equation residual (i gamma d - m) P = 0, Richardson-refined fd
    worst = 0.0
    for _ in range(6):
        xi = rng.uniform(-0.8, 0.8, 4)

        def pmat(v):
            return kernel.kernel_p(v, np.zeros(4), p).matrix

        def dirac_resid(h):
            grad = []
            for j in range(4):
                e = np.zeros(4)
                e[j] = h
                grad.append((pmat(xi + e) - pmat(xi - e)) / (2.0 * h))
            sl = sum(spinor.GAMMA[j] @ grad[j] for j in range(4))
            return 1j * sl - p.m * pmat(xi)

        r1 = dirac_resid(2e-3)
        r2 = dirac_resid(1e-3)
        r = (4.0 * r2 - r1) / 3.0
        scale = p.m * np.max(np.abs(pmat(xi)))
        worst = max(worst, float(np.max(np.abs(r))) / scale)
    out.append(("dirac_equation_residual", worst <= 1e-4,
                "max rel %.2e" % worst))
    return out


def suite_spectral(seed=12345, n_trials=1000):
    rng = np.random.default_rng(seed)
    out = []
    t = rng.uniform(-3.0, 3.0, n_trials)
    r = rng.uniform(1e-3, 4.0, n_trials)
    eps = 0.2
    m = 1.0
    a, b = chain.invariants_from_radial(t, r, eps, m)
    lam_p = a + np.sqrt(b.astype(complex))
    lam_m = a - np.sqrt(b.astype(complex))

    xi = np.zeros((n_trials, 4))
    xi[:, 0] = t
    xi[:, 1] = r
    pr = RegKernelParams(m, eps)
    pxy = kernel.kernel_matrix_batch(xi, pr)
    pyx = kernel.kernel_matrix_batch(-xi, pr)
    amat = pxy @ pyx
    ev = np.linalg.eigvals(amat)
    scale = np.maximum(np.abs(lam_p), np.abs(lam_m)) + 1e-300
    ok = True
    for i in range(n_trials):
        tol = 1e-8 * scale[i]
        cp = int(np.sum(np.abs(ev[i] - lam_p[i]) <= tol))
        cm = int(np.sum(np.abs(ev[i] - lam_m[i]) <= tol))
        if not (cp >= 2 and cm >= 2 and cp + cm >= 4):
            ok = False
            break
    out.append(("closed_form_eigenvalues", ok,
                "multiplicity-2 match on %d pairs" % n_trials))

    out.append(("a_sq_ge_b", bool(np.all(a * a >= b - 1e-12 * (a * a + 1.0))),
                "det >= 0 everywhere sampled"))

    lag = chain.lagrangian_from_radial(t, r, eps, m)
    alt = (np.abs(lam_p) - np.abs(lam_m)) ** 2
    dev = np.max(np.abs(lag - alt) / (np.abs(lag) + np.abs(alt) + 1e-300))
    out.append(("lagrangian_identity", dev <= 1e-8, "max rel %.2e" % dev))

    space = b < 0
    out.append(("spacelike_lagrangian_zero",
                bool(np.all(lag[space] == 0.0)),
                "%d spacelike samples" % int(space.sum())))
    return out


def suite_integrability(seed=12345):
    out = []
    p = RegKernelParams(1.0, 0.1)
    r1 = quadrature.integrate_p4(p, tol=0.005, T=20.0, R=24.0)
    r2 = quadrature.integrate_p4(p, tol=0.005, T=40.0, R=48.0)
    cauchy = abs(r2.value - r1.value) / abs(r2.value)
    out.append(("p4_domain_doubling", cauchy <= 0.01,
                "Cauchy diff %.2e" % cauchy))

    l1 = quadrature.integrate_lagrangian(p, tol=0.005, T=20.0, R=24.0)
    l2 = quadrature.integrate_lagrangian(p, tol=0.005, T=40.0, R=48.0)
    cauchy_l = abs(l2.value - l1.value) / abs(l2.value)
    out.append(("lagrangian_domain_doubling", cauchy_l <= 0.01,
                "Cauchy diff %.2e" % cauchy_l))

    sound = True
    details = []
    for t0, r0 in ((15.0, 18.0), (20.0, 24.0), (30.0, 36.0)):
        ra = quadrature.integrate_p4(p, tol=0.005, T=t0, R=r0)
        rb = quadrature.integrate_p4(p, tol=0.005, T=2 * t0, R=2 * r0)
        change = abs(rb.value - ra.value)
        slack = change <= ra.tail_bound + ra.abs_error_estimate \
            + rb.abs_error_estimate
        sound = sound and slack
        details.append("T=%g: change %.1e vs bound %.1e"
                       % (t0, change, ra.tail_bound))
    out.append(("tail_bound_soundness", sound, "; ".join(details)))

    est, se = quadrature.mc_p4_at_x(p, np.array([0.7, -0.3, 0.2, 0.1]),
                                    n_samples=60000, seed=seed)
    combined = np.sqrt(se ** 2 + r2.abs_error_estimate ** 2
                       + r2.tail_bound ** 2)
    z = abs(est - r2.value) / combined
    out.append(("mc_x_independence", z <= 3.0, "z = %.2f" % z))
    return out


def suite_geometry(seed=12345, n=10000):
    rng = np.random.default_rng(seed)
    out = []
    t = rng.uniform(-10.0, 10.0, n)
    r = rng.uniform(0.0, 12.0, n)
    eps = 0.1
    zeta = -((t + 1j * eps) ** 2) + r * r
    direct = np.real(np.sqrt(zeta))
    ours = quadrature.exponent_exact(t, r, eps)
    dev = np.max(np.abs(direct - ours) / (np.abs(direct) + 1e-30))
    out.append(("exponent_identity", dev <= 1e-12, "max rel %.2e" % dev))

    lam = 0.85
    bad = 0
    checked = 0
    for i in range(n):
        ti, ri = abs(t[i]) + 1e-6, r[i]
        tag = quadrature.region_classify_radial(ti, ri, lam)
        if tag is quadrature.RegionTag.C2 or (
                tag is quadrature.RegionTag.C1minus and ti >= 1.0):
            checked += 1
            lb = quadrature.decay_lower_bound(
                np.array([ti, ri, 0.0, 0.0]), eps, lam)
            ex = float(quadrature.exponent_exact(ti, ri, eps))
            if lb > ex + 1e-12:
                bad += 1
    out.append(("proof_lower_bounds", bad == 0,
                "%d/%d region samples, %d violations" % (checked, n, bad)))
    return out


def suite_abstract(seed=12345, n_pairs=10000):
    rng = np.random.default_rng(seed)
    out = []
    n, dim = 2, 8

    worst = 0.0
    for _ in range(n_pairs):
        a = abstract_cfs.random_regular_operator(n, dim, rng)
        b = abstract_cfs.random_regular_operator(n, dim, rng)
        d = np.linalg.norm(a.matrix - b.matrix, 2)
        dev = np.max(np.abs(abstract_cfs.ordered_spectrum(a)
                            - abstract_cfs.ordered_spectrum(b))) - d
        worst = max(worst, dev)
    out.append(("eigenvalue_lipschitz", worst <= 1e-12,
                "max excess %.2e over %d pairs" % (worst, n_pairs)))

    worst = 0.0
    for _ in range(n_pairs):
        s = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        tmat = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        sv_s = np.linalg.svd(s, compute_uv=False)
        sv_t = np.linalg.svd(tmat, compute_uv=False)
        d = np.linalg.norm(s - tmat, 2)
        worst = max(worst, float(np.max(np.abs(sv_s - sv_t))) - d)
    out.append(("singular_value_lipschitz", worst <= 1e-12,
                "max excess %.2e" % worst))

    worst = 0.0
    for _ in range(n_pairs):
        x = abstract_cfs.random_regular_operator(n, dim, rng)
        gx = abstract_cfs.gen_inverse(x)
        radius = 1.0 / (4.0 * gx.norm())
        delta = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        delta = 0.5 * (delta + delta.conj().T)
        delta *= rng.uniform(0.0, 1.0) * radius / np.linalg.norm(delta, 2)
        try:
            y = abstract_cfs.CfsOperator(x.matrix + delta, n)
        except abstract_cfs.SignatureError:
            continue
        if not abstract_cfs.is_regular(y):
            continue
        gy = abstract_cfs.gen_inverse(y)
        lhs = np.linalg.norm(gy.matrix - gx.matrix, 2)
        rhs = 6.0 * gx.norm() ** 2 * np.linalg.norm(delta, 2)
        worst = max(worst, lhs - rhs)
    out.append(("gen_inverse_lipschitz", worst <= 1e-10,
                "max excess %.2e" % worst))

    zero = abstract_cfs.make_operator(np.zeros((dim, dim)), n)
    dev = 0.0
    for eps in (0.5, 0.1, 0.01):
        xp = abstract_cfs.regular_perturbation(zero, eps, seed=seed)
        dev = max(dev, abs(abstract_cfs.gen_inverse(xp).norm() - 1.0 / eps))
    out.append(("gen_inverse_discontinuity_witness", dev <= 1e-10,
                "max |  ||g|| - 1/eps | = %.2e" % dev))

    ok = True
    for _ in range(n_pairs):
        x = abstract_cfs.random_regular_operator(n, dim, rng)
        y = abstract_cfs.random_regular_operator(n, dim, rng)
        try:
            abstract_cfs.admissibility_bounds(x, y)
        except AssertionError:
            ok = False
            break
    out.append(("admissibility_chains", ok, "%d pairs" % n_pairs))

    worst = 0.0
    for _ in range(200):
        x = abstract_cfs.random_regular_operator(n, dim, rng)
        psi, signs = abstract_cfs.local_representation(x)
        recon = -(psi.conj().T * signs) @ psi
        worst = max(worst, np.linalg.norm(recon - x.matrix, 2)
                    / max(x.norm(), 1e-300))
    out.append(("local_representation", worst <= 1e-10,
                "max rel resid %.2e" % worst))
    return out


def suite_variation(seed=12345):
    rng = np.random.default_rng(seed)
    out = []
    m = 1.0
    worst = 0.0
    from scipy.optimize import linear_sum_assignment
    for _ in range(5):
        x = rng.uniform(-1.0, 1.0, 4)
        y = rng.uniform(-1.0, 1.0, 4)
        e1, e2 = rng.uniform(0.1, 0.3, 2)
        mc = chain.mixed_chain(x, y, e1, e2, m)
        ev_mc = np.linalg.eigvals(mc)
        pc = sea_variation.product_coefficient_matrix(x, y, e1, e2, m)
        ev_pc = np.linalg.eigvals(pc)
        scale = float(np.max(np.abs(ev_pc)))
        nz_pc = ev_pc[np.abs(ev_pc) > 1e-8 * scale]
        nz_mc = ev_mc[np.abs(ev_mc) > 1e-8 * scale]
        if nz_pc.size != nz_mc.size:
            worst = np.inf
            break
        cost = np.abs(nz_pc[:, None] - nz_mc[None, :])
        ri, ci = linear_sum_assignment(cost)
        worst = max(worst, float(cost[ri, ci].max()) / scale)
    out.append(("mixed_chain_product_oracle", worst <= 1e-7,
                "max rel %.2e" % worst))

    p = RegKernelParams(m, 0.1)
    lam_list = [s * f * p.eps for f in (0.2, 0.1, 0.05, 0.025)
                for s in (1, -1)]
    rows, fit = sea_variation.holder_sweep(lam_list, p, tol=0.005)
    dls = [row[2] for row in rows]
    shrink = max(dls[-2:]) < max(dls[:2])
    ok = fit["alpha"] > 0 and fit["r2"] >= 0.9 and shrink
    out.append(("holder_sweep", bool(ok),
                "alpha %.3f r2 %.3f" % (fit["alpha"], fit["r2"])))

    d1 = sea_variation.op_norm_difference(np.zeros(4), 0.1, 0.2, m)
    d2 = sea_variation.op_norm_difference(
        np.array([0.4, -0.2, 0.7, 0.1]), 0.1, 0.2, m)
    dev = abs(d1 - d2) / d1
    out.append(("op_norm_translation_invariance", dev <= 1e-10,
                "rel diff %.2e" % dev))
    return out


def suite_em(seed=12345, fast=True):
    rng = np.random.default_rng(seed)
    out = []
    p = RegKernelParams(1.0, 0.1)
    a = em_perturb.Potential()
    gp, resid = em_perturb.calibrate_green(p.m, p)
    out.append(("green_calibration", resid <= 1e-3,
                "alpha %.4f beta %.4f resid %.2e"
                % (gp.alpha_const, gp.beta_const, resid)))

    z1 = np.array([-0.3, 0.1, 0.0, -0.2])
    z2 = np.array([-0.2, -0.1, 0.2, 0.0])
    worst = 0.0
    n_ext = 0
    interior = em_perturb.f1_matrix_element(
        np.array([2.0, 0.2, -0.1, 0.3]), z1, 1, z2, 2, a, p, gp)
    scale = abs(interior)
    for _ in range(50):
        t0 = rng.uniform(-2.0, 3.0)
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        if t0 <= a.center[0] - a.radius:
            rr = rng.uniform(0.0, 3.0)       # before the potential acts
        else:
            # outside the forward cone of the support ball
            rr = (t0 - a.center[0]) + a.radius + rng.uniform(0.3, 3.0)
        x = np.array([t0, *(d * rr)])
        val = em_perturb.f1_matrix_element(x, z1, 1, z2, 2, a, p, gp)
        worst = max(worst, abs(val))
        n_ext += 1
    out.append(("causal_support", worst <= 1e-6 * scale,
                "max |elem| %.2e at %d exterior points (scale %.2e)"
                % (worst, n_ext, scale)))

    x_in = np.array([2.0, 0.2, -0.1, 0.3])
    v12 = em_perturb.f1_matrix_element(x_in, z1, 1, z2, 2, a, p, gp)
    v21 = em_perturb.f1_matrix_element(x_in, z2, 2, z1, 1, a, p, gp)
    dev = abs(v12 - np.conj(v21))
    out.append(("self_adjointness", dev <= 1e-6 * max(abs(v12), 1e-300),
                "dev %.2e scale %.2e" % (dev, abs(v12))))
    return out


SUITES = {
    "bessel": suite_bessel,
    "kernel": suite_kernel,
    "spectral": suite_spectral,
    "integrability": suite_integrability,
    "geometry": suite_geometry,
    "abstract": suite_abstract,
    "variation": suite_variation,
    "em": suite_em,
}


def run_suite(name: str, seed: int = 12345):
    if name == "all":
        results = []
        for key in SUITES:
            results.extend((key + "." + cname, ok, detail)
                           for cname, ok, detail in SUITES[key](seed))
        return results
    if name not in SUITES:
        raise KeyError("unknown suite: %s" % name)
    return SUITES[name](seed)
