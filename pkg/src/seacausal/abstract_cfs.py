"""Finite-rank self-adjoint operators with bounded signature: the
finite-dimensional operator model underlying the causal structure.

An operator x is admissible when it is Hermitian with at most n positive
and at most n negative eigenvalues.  The module provides the ordered
spectrum, signature and regularity tests, regular perturbations, the
generalized inverse, spin kernels and chains, the abstract Lagrangian
with its causal trichotomy, faithful spin frames, admissibility bounds,
a local representation x = -Psi* Psi, and eigenvalue-enumeration
matching for operator sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

_HERMITIAN_TOL = 1e-12
_EIG_ZERO_TOL = 1e-12        # scaled by (1 + ||matrix||)
_IDENTITY_TOL = 1e-10


class SignatureError(ValueError):
    """More than n eigenvalues of one sign."""


class RegularityError(ValueError):
    """Operation requires a regular operator."""


class CfsOperator:
    """Hermitian matrix with at most n positive and n negative eigenvalues."""

    def __init__(self, matrix, n: int):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("matrix must be square")
        scale = max(np.linalg.norm(matrix, 2), 1.0)
        if np.max(np.abs(matrix - matrix.conj().T)) > _HERMITIAN_TOL * scale:
            raise ValueError("matrix not Hermitian")
        if n < 1:
            raise ValueError("n must be >= 1")
        self.matrix = 0.5 * (matrix + matrix.conj().T)
        self.n = n
        self.dim = matrix.shape[0]
        self.eigvals, self.eigvecs = np.linalg.eigh(self.matrix)
        tol = _EIG_ZERO_TOL * (1.0 + np.max(np.abs(self.eigvals), initial=0.0))
        self._zero_tol = tol
        n_neg = int(np.sum(self.eigvals < -tol))
        n_pos = int(np.sum(self.eigvals > tol))
        if n_neg > n or n_pos > n:
            raise SignatureError(
                "signature (%d, %d) exceeds (n, n) = (%d, %d)"
                % (n_neg, n_pos, n, n))
        self._sig = (n_neg, n_pos)

    def norm(self) -> float:
        return float(np.max(np.abs(self.eigvals), initial=0.0))


def make_operator(matrix, n: int) -> CfsOperator:
    return CfsOperator(matrix, n)


def ordered_spectrum(x: CfsOperator) -> np.ndarray:
    """2n values: the n negative eigenvalues by non-increasing absolute
    value (most negative first), then the n positive ones increasingly;
    missing entries padded with zero."""
    n = x.n
    tol = x._zero_tol
    neg = np.sort(x.eigvals[x.eigvals < -tol])          # most negative first
    pos = np.sort(x.eigvals[x.eigvals > tol])           # increasing
    out = np.zeros(2 * n)
    out[:neg.size] = neg
    out[2 * n - pos.size:] = pos
    return out


def signature(x: CfsOperator) -> tuple[int, int]:
    return x._sig


def is_regular(x: CfsOperator) -> bool:
    return x._sig == (x.n, x.n)


def regular_perturbation(x: CfsOperator, eps: float,
                         seed: int = 0) -> CfsOperator:
    """Fill the missing signature with eps-scaled rank-one terms on a
    (randomly rotated) orthonormal set in the kernel of x.  The result is
    regular and at distance exactly eps from x (when x is not regular)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if is_regular(x):
        return x
    n_neg, n_pos = x._sig
    need_neg = x.n - n_neg
    need_pos = x.n - n_pos
    kern = x.eigvecs[:, np.abs(x.eigvals) <= x._zero_tol]
    if kern.shape[1] < need_neg + need_pos:
        raise ValueError("ambient dimension too small for a regular "
                         "perturbation")
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(kern.shape[1], kern.shape[1]))
                        + 1j * rng.normal(size=(kern.shape[1],
                                                kern.shape[1])))
    basis = kern @ q
    delta = np.zeros_like(x.matrix)
    for j in range(need_pos):
        v = basis[:, j]
        delta += eps * np.outer(v, v.conj())
    for j in range(need_pos, need_pos + need_neg):
        v = basis[:, j]
        delta -= eps * np.outer(v, v.conj())
    return CfsOperator(x.matrix + delta, x.n)


def gen_inverse(x: CfsOperator) -> CfsOperator:
    """Inverse on the range, zero on its orthogonal complement."""
    inv = np.where(np.abs(x.eigvals) > x._zero_tol,
                   1.0 / np.where(np.abs(x.eigvals) > x._zero_tol,
                                  x.eigvals, 1.0),
                   0.0)
    g = (x.eigvecs * inv) @ x.eigvecs.conj().T
    return CfsOperator(g, x.n)


def range_projection(x: CfsOperator) -> np.ndarray:
    mask = np.abs(x.eigvals) > x._zero_tol
    v = x.eigvecs[:, mask]
    return v @ v.conj().T


def spin_kernel(x: CfsOperator, y: CfsOperator) -> np.ndarray:
    """P(x, y) = pi_x y as an ambient matrix."""
    return range_projection(x) @ y.matrix


def spin_chain(x: CfsOperator, y: CfsOperator) -> np.ndarray:
    """A_xy = P(x, y) P(y, x); its nonzero spectrum is that of x y."""
    return spin_kernel(x, y) @ spin_kernel(y, x)


def chain_spectrum(x: CfsOperator, y: CfsOperator) -> np.ndarray:
    """Nonzero-padded spectrum of x y, ordered to 2n entries: by
    decreasing absolute value, padded with zeros."""
    ev = np.linalg.eigvals(x.matrix @ y.matrix)
    tol = _EIG_ZERO_TOL * (1.0 + np.max(np.abs(ev), initial=0.0))
    ev = ev[np.abs(ev) > tol]
    order = np.argsort(-np.abs(ev), kind="stable")
    ev = ev[order]
    out = np.zeros(2 * x.n, dtype=complex)
    k = min(ev.size, 2 * x.n)
    out[:k] = ev[:k]
    return out


def abstract_lagrangian(x: CfsOperator, y: CfsOperator) -> float:
    """L = (1/4n) sum_{i,j} (|lam_i| - |lam_j|)^2 over the 2n-padded
    spectrum of x y."""
    lam = np.abs(chain_spectrum(x, y))
    n2 = lam.size
    diffs = lam[:, None] - lam[None, :]
    return float(np.sum(diffs * diffs) / (2.0 * n2))


def causal_classify_abstract(x: CfsOperator, y: CfsOperator) -> str:
    """'S' if all |lam| equal; 'T' if all lam real with unequal |lam|;
    'L' otherwise."""
    lam = chain_spectrum(x, y)
    scale = 1.0 + np.max(np.abs(lam), initial=0.0)
    tol = 1e-10 * scale
    absl = np.abs(lam)
    same_abs = np.max(absl) - np.min(absl) <= tol
    if same_abs:
        return "S"
    all_real = np.max(np.abs(lam.imag)) <= tol
    return "T" if all_real else "L"


@dataclass
class SpinFrame:
    vectors: np.ndarray      # dim x 2n, columns e_j
    signs: np.ndarray        # length 2n, +-1; spin product <e_i|e_j> = s_i d_ij
    hilbert_vectors: np.ndarray  # columns sqrt|x| e_j, orthonormal


def faithful_frame(x: CfsOperator) -> SpinFrame:
    """Pseudo-orthonormal basis of the range: first n columns span the
    negative spectral subspace, last n the positive one.  The spin product
    on the range is <u|v>_x = -<u, x v>."""
    if not is_regular(x):
        raise RegularityError("faithful frame requires a regular operator")
    tol = x._zero_tol
    neg_idx = np.where(x.eigvals < -tol)[0]
    pos_idx = np.where(x.eigvals > tol)[0]
    cols = []
    signs = []
    for i in neg_idx:
        cols.append(x.eigvecs[:, i] / np.sqrt(-x.eigvals[i]))
        signs.append(1)       # -<e, x e> = +1 on the negative subspace
    for i in pos_idx:
        cols.append(x.eigvecs[:, i] / np.sqrt(x.eigvals[i]))
        signs.append(-1)
    e = np.stack(cols, axis=1)
    hil = e * np.sqrt(np.abs(x.eigvals[np.concatenate([neg_idx, pos_idx])]))
    return SpinFrame(vectors=e, signs=np.array(signs), hilbert_vectors=hil)


def admissibility_bounds(x: CfsOperator, y: CfsOperator):
    """(||P(x,y)|| ||P(y,x)||, ||x|| ||g(y)|| ||P(x,y)||), asserting the
    two inequality chains they bound."""
    pxy = spin_kernel(x, y)
    pyx = spin_kernel(y, x)
    a = pxy @ pyx
    norm_a = np.linalg.norm(a, 2)
    npxy = np.linalg.norm(pxy, 2)
    npyx = np.linalg.norm(pyx, 2)
    lam_max = np.max(np.abs(chain_spectrum(x, y)), initial=0.0)
    g_y = gen_inverse(y)
    bound_i = npxy * npyx
    bound_ii = x.norm() * g_y.norm() * npxy
    scale = 1.0 + max(bound_i, bound_ii)
    if lam_max > norm_a + 1e-10 * scale or norm_a > bound_i + 1e-10 * scale:
        raise AssertionError("spectral/operator-norm chain violated")
    if npyx > bound_ii + 1e-10 * scale:
        raise AssertionError("kernel-transposition bound violated")
    return bound_i, bound_ii


def local_representation(x: CfsOperator):
    """Psi: ambient -> C^{2n} with x = -Psi* Psi, where the adjoint is
    taken w.r.t. the indefinite product a^dag S b on C^{2n}
    (S = diag(signs), +1 on the image of the negative subspace).

    Returns (psi, signs); psi is the 2n x dim matrix of the map.
    """
    if not is_regular(x):
        raise RegularityError("local representation requires regularity")
    fr = faithful_frame(x)
    # hilbert_vectors columns are orthonormal eigenvectors; scaling row j
    # by sqrt|nu_j| makes -Psi^dag S Psi reproduce x (s_j = -sign nu_j)
    abs_nu = 1.0 / np.linalg.norm(fr.vectors, axis=0) ** 2
    psi = fr.hilbert_vectors.conj().T * np.sqrt(abs_nu)[:, None]
    recon = -(psi.conj().T * fr.signs) @ psi
    if np.linalg.norm(recon - x.matrix, 2) > _IDENTITY_TOL * max(x.norm(), 1.0):
        raise AssertionError("local representation reconstruction failed")
    return psi, fr.signs


def enumeration_match(sequence, target) -> np.ndarray:
    """Match eigenvalues of each matrix in `sequence` to those of `target`
    by minimum-cost bipartite assignment on |nu_i - nu_j|.

    Returns an array of shape (len(sequence), dim): row m holds the
    eigenvalues of sequence[m] reordered to follow target's enumeration.
    """
    target = np.asarray(target, dtype=complex)
    ref = np.linalg.eigvals(target)
    rows = []
    for tm in sequence:
        ev = np.linalg.eigvals(np.asarray(tm, dtype=complex))
        cost = np.abs(ev[:, None] - ref[None, :])
        ri, ci = linear_sum_assignment(cost)
        row = np.empty_like(ref)
        row[ci] = ev[ri]
        rows.append(row)
    return np.stack(rows, axis=0)


def minmax_excess(a, m_basis) -> float:
    """sup of <Au, u> over unit u orthogonal to span(m_basis): the
    largest eigenvalue of A compressed to the orthogonal complement."""
    a = np.asarray(a, dtype=complex)
    m_basis = np.asarray(m_basis, dtype=complex)
    if m_basis.ndim == 1:
        m_basis = m_basis[:, None]
    d = a.shape[0]
    q, _ = np.linalg.qr(np.concatenate(
        [m_basis, np.eye(d, dtype=complex)], axis=1))
    comp = q[:, m_basis.shape[1]:d]
    return float(np.max(np.linalg.eigvalsh(comp.conj().T @ a @ comp)))


def random_regular_operator(n: int, dim: int, rng) -> CfsOperator:
    """x = -B^dag J B with J = diag(1_n, -1_n) and random full-rank B:
    exact signature (n, n)."""
    b = (rng.normal(size=(2 * n, dim)) + 1j * rng.normal(size=(2 * n, dim)))
    j = np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
    return CfsOperator(-b.conj().T @ j @ b, n)
