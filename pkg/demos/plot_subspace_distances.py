"""
Distances between subspaces
===========================

Principal angles, sin-theta norms and the best orthogonal alignment for two
random planes in R^6.
"""

import numpy as np

from spectral_perturb import principal_angles, procrustes_align, sin_theta_frobenius, sin_theta_operator
from spectral_perturb.harness import haar_orthogonal

rng = np.random.default_rng(0)
v = haar_orthogonal(6, rng)[:, :2]

# tilt the plane a little
noise = 0.1 * rng.standard_normal((6, 2))
vhat, _ = np.linalg.qr(v + noise)

angles = principal_angles(vhat, v)
print("angles (deg):", np.degrees(angles.angles).round(4))
print("||sin Theta||_F  =", sin_theta_frobenius(vhat, v))
print("||sin Theta||_op =", sin_theta_operator(vhat, v))

# The frame vhat is only determined up to a rotation of its columns; the
# Procrustes rotation undoes that before measuring the distance.
align = procrustes_align(vhat, v)
print("naive distance   =", np.linalg.norm(vhat - v))
print("aligned distance =", align.distance)
print("sqrt(2) sin      =", np.sqrt(2) * sin_theta_frobenius(vhat, v))

# Rotating either basis changes nothing.
r = haar_orthogonal(2, rng)
print("after rotating vhat:", sin_theta_frobenius(vhat @ r, v), procrustes_align(vhat @ r, v).distance)
