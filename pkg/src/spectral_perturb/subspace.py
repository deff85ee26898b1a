"""
Distances between subspaces given by orthonormal frames: principal angles,
sin-theta norms, the optimal orthogonal (Procrustes) alignment, sign
orientation of single vectors and the sin(2 theta) identity.
"""

from dataclasses import dataclass

import numpy as np

from .matrix_core import MatrixError, as_dense, frobenius_norm, svd

FRAME_TOL = 1e-10
COSINE_SLACK = 1e-8


@dataclass(frozen=True)
class PrincipalAngleSet:
    """Principal angles (ascending) and their cosines (descending)."""

    angles: np.ndarray
    cosines: np.ndarray

    @property
    def d(self):
        return self.angles.shape[0]


@dataclass(frozen=True)
class Alignment:
    """Orthogonal ``rotation`` minimising ``||vhat @ rotation - v||_F``."""

    rotation: np.ndarray
    distance: float


def as_frame(v, tol=FRAME_TOL):
    """Return ``v`` as a p x d array with orthonormal columns.

    One-dimensional input is read as a single column.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim == 1:
        v = v.reshape(-1, 1)
    v = as_dense(v)
    p, d = v.shape
    if d > p:
        raise MatrixError(f"frame has more columns than rows ({p} x {d})")
    err = frobenius_norm(v.T @ v - np.eye(d))
    if err > tol * max(1, d):
        raise MatrixError(f"frame columns are not orthonormal (||V^T V - I||_F = {err:.3e})")
    return v


def _pair(vhat, v):
    vhat = as_frame(vhat)
    v = as_frame(v)
    if vhat.shape != v.shape:
        raise MatrixError(f"frames differ in shape: {vhat.shape} vs {v.shape}")
    return vhat, v


def _cosines(vhat, v):
    s = svd(vhat.T @ v).singular_values
    if s[0] > 1.0 + COSINE_SLACK:
        raise MatrixError(f"cosine {s[0]:.12f} exceeds 1; frames are not orthonormal")
    return np.clip(s, 0.0, 1.0)


def principal_angles(vhat, v):
    """Principal angles between the column spaces of two frames.

    Cosines are the singular values of ``vhat.T @ v`` clamped into [0, 1].
    Angles are reported in ascending order; those below pi/4 come from the
    arcsine of the singular values of ``(I - V V^T) vhat`` because arccos
    loses about half the digits near zero.
    """
    vhat, v = _pair(vhat, v)
    cosines = _cosines(vhat, v)
    sines = np.clip(np.sort(svd(_residual(vhat, v)).singular_values), 0.0, 1.0)
    angles = np.where(cosines > np.sqrt(0.5), np.arcsin(sines), np.arccos(cosines))
    return PrincipalAngleSet(angles=angles, cosines=cosines)


def _residual(vhat, v):
    # (I - V V^T) vhat; its singular values are the sines of the angles.
    # Identical frames give exact zeros rather than rounding noise.
    if np.array_equal(vhat, v):
        return np.zeros_like(v)
    return vhat - v @ (v.T @ vhat)


def sin_theta_frobenius(vhat, v):
    """``||sin Theta(vhat, v)||_F``.

    Evaluated as the Frobenius norm of ``(I - V V^T) Vhat``, which equals
    ``sqrt(d - ||Vhat^T V||_F^2)`` but keeps full accuracy at small angles.
    """
    vhat, v = _pair(vhat, v)
    return frobenius_norm(_residual(vhat, v))


def sin_theta_identity(vhat, v):
    """``sqrt(max(0, d - ||Vhat^T V||_F^2))`` evaluated literally."""
    vhat, v = _pair(vhat, v)
    d = v.shape[1]
    return float(np.sqrt(max(0.0, d - frobenius_norm(vhat.T @ v) ** 2)))


def sin_theta_operator(vhat, v):
    """Sine of the largest principal angle."""
    vhat, v = _pair(vhat, v)
    return min(1.0, float(svd(_residual(vhat, v)).singular_values[0]))


def procrustes_align(vhat, v):
    """Optimal orthogonal alignment of ``vhat`` onto ``v``.

    With the SVD ``vhat.T @ v = O1 diag(cos theta) O2^T`` the minimiser of
    ``||vhat @ O - v||_F`` over orthogonal ``O`` is ``O1 @ O2.T``.
    """
    vhat, v = _pair(vhat, v)
    if np.array_equal(vhat, v):
        return Alignment(rotation=np.eye(v.shape[1]), distance=0.0)
    f = svd(vhat.T @ v)
    rotation = f.left @ f.right.T
    distance = frobenius_norm(vhat @ rotation - v)
    return Alignment(rotation=rotation, distance=distance)


def _unit(x, name):
    x = np.asarray(x, dtype=float).reshape(-1)
    n = np.linalg.norm(x)
    if n == 0:
        raise MatrixError(f"{name} is the zero vector")
    if abs(n - 1.0) > FRAME_TOL:
        raise MatrixError(f"{name} is not a unit vector (norm {n:.12f})")
    return x


def orient_sign(vhat, v):
    """Return ``+vhat`` or ``-vhat``, whichever has nonnegative inner product with ``v``."""
    vhat = _unit(vhat, "vhat")
    v = _unit(v, "v")
    if vhat.shape != v.shape:
        raise MatrixError(f"vectors differ in length: {vhat.size} vs {v.size}")
    return vhat if vhat @ v >= 0 else -vhat


def sin2theta_identity_check(vhat, v, tol=1e-10):
    """Compare the two expressions for ``sin^2(2 theta)`` of a vector pair.

    ``lhs = (2 c)^2 (1 - c^2)`` with ``c = vhat.v`` and
    ``rhs = 1/4 m (2 - m)^2 (4 - m)`` with ``m = ||vhat - v||^2 = 2 - 2c``.
    The pair must already be oriented so that ``c >= 0``.

    Returns ``(lhs, rhs, agree)``.
    """
    vhat = _unit(vhat, "vhat")
    v = _unit(v, "v")
    c = float(vhat @ v)
    if c < -FRAME_TOL:
        raise MatrixError("vectors must be oriented with vhat.v >= 0")
    lhs = (2 * c) ** 2 * (1 - c * c)
    m = float(np.sum((vhat - v) ** 2))
    rhs = 0.25 * m * (2 - m) ** 2 * (4 - m)
    return lhs, rhs, abs(lhs - rhs) <= tol
