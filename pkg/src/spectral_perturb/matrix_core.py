"""
Dense real matrix utilities: validation, norms, Jacobi eigensolver and SVD,
Kronecker/vec helpers, orthonormal completion and the two classical
spectrum-comparison inequalities (Weyl, Wielandt-Hoffman).

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  The
decompositions are implemented here (cyclic Jacobi, round-robin ordering)
rather than delegated to LAPACK so that output is deterministic and the
library has a numerical core that can be checked against an independent
solver.
"""

from dataclasses import dataclass

import numpy as np

SYMTOL = 1e-12
JACOBI_TOL = 1e-14
MAX_SWEEPS = 60
MAX_ENTRIES = 2**31


class MatrixError(ValueError):
    """Raised for malformed matrix input (shape, finiteness, symmetry)."""


class ConvergenceError(RuntimeError):
    """Raised when a Jacobi iteration does not converge.

    The final off-diagonal residual is kept in ``residual``.
    """

    def __init__(self, msg, residual):
        super().__init__(msg)
        self.residual = residual


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order and matching orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def p(self):
        return self.eigenvalues.shape[0]

    def block(self, r, s):
        """Eigenvectors r..s (1-based, inclusive) as a p x d frame."""
        return self.eigenvectors[:, r - 1:s]


@dataclass(frozen=True)
class SvdFactorization:
    """Thin SVD ``a = left @ diag(singular_values) @ right.T``."""

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    def rank(self, rel_tol=1e-10):
        s = self.singular_values
        if s.size == 0 or s[0] == 0:
            return 0
        return int(np.count_nonzero(s > rel_tol * s[0]))


def as_dense(a):
    """Validate and return ``a`` as a finite 2-D float64 array."""
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise MatrixError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise MatrixError("matrix has non-finite entries")
    return a


def as_symmetric(a, symtol=SYMTOL):
    """Validate a square matrix as symmetric and return its symmetric part.

    Asymmetry up to ``symtol * max(1, ||a||_F)`` is absorbed by averaging
    with the transpose; anything larger is rejected.
    """
    a = as_dense(a)
    if a.shape[0] != a.shape[1]:
        raise MatrixError(f"symmetric matrix must be square, got shape {a.shape}")
    asym = np.max(np.abs(a - a.T))
    limit = symtol * max(1.0, frobenius_norm(a))
    if asym > limit:
        raise MatrixError(f"matrix is not symmetric: max |a_ij - a_ji| = {asym:.3e} > {limit:.3e}")
    return 0.5 * (a + a.T)


def frobenius_norm(a):
    a = np.asarray(a, dtype=float)
    # scale first so squares cannot overflow
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(scale * np.sqrt(np.sum((a / scale) ** 2)))


def operator_norm(a):
    """Largest singular value of ``a``."""
    return float(svd(a).singular_values[0])


def symmetric_operator_norm(a):
    """Operator norm of a symmetric matrix as ``max_j |lambda_j|``."""
    return float(np.max(np.abs(sym_eig(a).eigenvalues)))


def _round_robin(n):
    """Pairings for a cyclic sweep: ``n - 1`` rounds of disjoint (i, j) pairs.

    Standard tournament schedule; with an odd ``n`` one index sits out each
    round.  Every unordered pair appears exactly once per sweep.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for k in range(m // 2):
            i, j = players[k], players[m - 1 - k]
            if i < n and j < n:
                pairs.append((min(i, j), max(i, j)))
        rounds.append((np.array([p[0] for p in pairs], dtype=int),
                       np.array([p[1] for p in pairs], dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _rotation_tangent(zeta):
    # t = sign(zeta) / (|zeta| + sqrt(1 + zeta^2)), the smaller root
    with np.errstate(over="ignore"):
        root = np.where(np.abs(zeta) < 1e150, np.sqrt(1.0 + zeta * zeta), np.abs(zeta))
    sign = np.where(zeta >= 0, 1.0, -1.0)
    return sign / (np.abs(zeta) + root)


def _fix_signs(vectors):
    # largest-magnitude entry positive; argmax picks the lowest index on ties
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return signs


def sym_eig(m, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS):
    """Symmetric eigendecomposition by cyclic Jacobi.

    Parameters
    ----------
    m : array-like, (p, p)
        Symmetric matrix.
    tol : float
        Stop once the off-diagonal Frobenius mass is below
        ``tol * ||m||_F``.
    max_sweeps : int
        Sweep limit before :class:`ConvergenceError` is raised.

    Returns
    -------
    SpectralDecomposition
        Eigenvalues sorted descending (stable, so ties keep their index
        order); each eigenvector has its largest-magnitude entry positive.
    """
    a = as_symmetric(m).copy()
    p = a.shape[0]
    q = np.eye(p)
    target = tol * frobenius_norm(a)
    rounds = _round_robin(p)

    def off(x):
        return frobenius_norm(x - np.diag(np.diag(x)))

    residual = off(a)
    sweeps = 0
    while residual > target:
        if sweeps == max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal residual {residual:.3e}, target {target:.3e})", residual)
        for i, j in rounds:
            if i.size == 0:
                continue
            apq = a[i, j]
            active = apq != 0.0
            if not np.any(active):
                continue
            app, aqq = a[i, i], a[j, j]
            safe = np.where(active, apq, 1.0)
            t = np.where(active, _rotation_tangent((aqq - app) / (2.0 * safe)), 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            rot = np.eye(p)
            rot[i, i] = c
            rot[j, j] = c
            rot[i, j] = s
            rot[j, i] = -s
            a = rot.T @ a @ rot
            a[i, j] = 0.0
            a[j, i] = 0.0
            q = q @ rot
        sweeps += 1
        residual = off(a)

    lam = np.diag(a).copy()
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    q = q[:, order]
    q = q * _fix_signs(q)
    return SpectralDecomposition(eigenvalues=lam, eigenvectors=q)


def svd(a, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS):
    """Thin SVD by one-sided (Hestenes) Jacobi.

    Wide matrices are handled through their transpose.  Columns whose norm
    falls to rounding level are treated as exact zeros and their left
    singular vectors are completed to an orthonormal set.  The sign of each
    (u_j, v_j) pair is fixed so that u_j has its largest-magnitude entry
    positive.
    """
    a = as_dense(a)
    if a.shape[0] < a.shape[1]:
        f = svd(a.T, tol=tol, max_sweeps=max_sweeps)
        u, s, v = f.right, f.singular_values, f.left
        signs = _fix_signs(u)
        return SvdFactorization(left=u * signs, singular_values=s, right=v * signs)

    m, n = a.shape
    w = a.copy()
    v = np.eye(n)
    rounds = _round_robin(n)

    def worst_pair(x):
        g = x.T @ x
        d = np.sqrt(np.diag(g))
        denom = np.outer(d, d)
        np.fill_diagonal(g, 0.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = np.where(denom > 0, np.abs(g) / denom, 0.0)
        return float(np.max(rel)) if n > 1 else 0.0

    residual = worst_pair(w)
    sweeps = 0
    while residual > tol:
        if sweeps == max_sweeps:
            raise ConvergenceError(
                f"one-sided Jacobi SVD did not converge in {max_sweeps} sweeps "
                f"(max relative column coupling {residual:.3e})", residual)
        for i, j in rounds:
            if i.size == 0:
                continue
            wi, wj = w[:, i], w[:, j]
            alpha = np.einsum("kl,kl->l", wi, wi)
            beta = np.einsum("kl,kl->l", wj, wj)
            gamma = np.einsum("kl,kl->l", wi, wj)
            active = np.abs(gamma) > tol * np.sqrt(alpha * beta)
            if not np.any(active):
                continue
            safe = np.where(active, gamma, 1.0)
            t = np.where(active, _rotation_tangent((beta - alpha) / (2.0 * safe)), 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            w[:, i] = c * wi - s * wj
            w[:, j] = s * wi + c * wj
            vi, vj = v[:, i].copy(), v[:, j].copy()
            v[:, i] = c * vi - s * vj
            v[:, j] = s * vi + c * vj
        sweeps += 1
        residual = worst_pair(w)

    sigma = np.sqrt(np.einsum("kl,kl->l", w, w))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    w = w[:, order]
    v = v[:, order]

    cutoff = m * np.finfo(float).eps * (sigma[0] if sigma.size else 0.0)
    live = sigma > cutoff
    u = np.zeros((m, n))
    u[:, live] = w[:, live] / sigma[live]
    sigma = np.where(live, sigma, 0.0)
    k = int(np.count_nonzero(live))
    if k < n:
        basis = _complete(u[:, :k], m)
        u[:, k:] = basis[:, : n - k]

    signs = _fix_signs(u)
    return SvdFactorization(left=u * signs, singular_values=sigma, right=v * signs)


def _complete(frame, p):
    """Orthonormal basis of the complement of ``frame``'s column space.

    Identity columns are orthogonalised against the frame in order of
    decreasing residual norm (pivoted modified Gram-Schmidt, applied twice).
    """
    d = frame.shape[1]
    basis = [frame[:, k] for k in range(d)]
    candidates = np.eye(p)
    out = []
    for _ in range(p - d):
        best, best_norm = None, -1.0
        for col in range(p):
            x = candidates[:, col].copy()
            for _pass in range(2):
                for b in basis:
                    x -= (b @ x) * b
            nx = np.linalg.norm(x)
            if nx > best_norm + 1e-12:
                best, best_norm = x, nx
        if best_norm < 1e-8:
            raise MatrixError("could not complete orthonormal basis (frame is rank deficient)")
        best = best / best_norm
        basis.append(best)
        out.append(best)
    if not out:
        return np.zeros((p, 0))
    return np.column_stack(out)


def orthonormal_complement(v):
    """Return V1 (p x (p - d)) with V1^T V1 = I and V^T V1 = 0.

    Deterministic: identity columns are orthogonalised against ``v`` with
    pivoting on the largest remaining norm; each resulting column has its
    largest-magnitude entry made positive.
    """
    v = as_dense(v)
    p, d = v.shape
    if d >= p:
        raise MatrixError(f"frame spans the whole space (d = p = {p}); complement is empty")
    v1 = _complete(v, p)
    return v1 * _fix_signs(v1)


def kron(a, b):
    """Kronecker product with block layout ``a[i, j] * b``."""
    a = as_dense(a)
    b = as_dense(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows * cols > MAX_ENTRIES:
        raise MatrixError(f"Kronecker product of size {rows} x {cols} is too large")
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(rows, cols)


def vec(a):
    """Stack the columns of ``a`` into one vector."""
    return np.asarray(a, dtype=float).reshape(-1, order="F")


def _check_same_size(pop, samp):
    if pop.eigenvalues.shape != samp.eigenvalues.shape:
        raise MatrixError(
            f"spectra have different sizes: {pop.eigenvalues.size} vs {samp.eigenvalues.size}")


def weyl_check(pop, samp, diff_op_norm, tol=1e-10):
    """Weyl: max_j |lamhat_j - lam_j| <= ||Sigmahat - Sigma||_op.

    Returns ``(lhs, rhs, holds)``.
    """
    _check_same_size(pop, samp)
    lhs = float(np.max(np.abs(samp.eigenvalues - pop.eigenvalues)))
    rhs = float(diff_op_norm)
    return lhs, rhs, lhs <= rhs + tol


def wielandt_hoffman_check(pop, samp, diff_frob_norm, tol=1e-10):
    """Wielandt-Hoffman: ||lamhat - lam||_2 <= ||Sigmahat - Sigma||_F."""
    _check_same_size(pop, samp)
    lhs = frobenius_norm(samp.eigenvalues - pop.eigenvalues)
    rhs = float(diff_frob_norm)
    return lhs, rhs, lhs <= rhs + tol
