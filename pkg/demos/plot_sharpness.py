"""
How tight are the eigenvector bounds?
=====================================

Two small diagonal and 2 x 2 examples where the population-gap bound is
attained exactly, or up to a factor of two.
"""

import numpy as np

from spectral_perturb import BlockSelection, evaluate_symmetric, gen_sharpness_diag, gen_sharpness_rotation

# Diagonal example: the top-d eigenspace of the perturbed matrix is
# orthogonal to the population one, so the alignment distance is sqrt(2d).
for p, d, eps in [(4, 2, 0.1), (10, 3, 0.05), (20, 10, 0.01)]:
    pop, samp = gen_sharpness_diag(p, d, eps)
    check = evaluate_symmetric(pop, samp, BlockSelection(1, d))["variant_align"]
    print(f"diag p={p:2d} d={d:2d} eps={eps:<5}  observed {check.observed:.6f}"
          f"  bound {check.bound:.6f}  ratio {check.ratio:.6f}")

# The classical bound needs a separation between sample and population
# eigenvalues; here it is 1.1 and the bound is much looser.
pop, samp = gen_sharpness_diag(4, 2, 0.1)
report = evaluate_symmetric(pop, samp, BlockSelection(1, 2))
print("classical delta:", report.gap.classical_delta,
      " classical bound:", round(report["classical_frobenius"].bound, 6),
      " variant bound:", round(report["variant_sin"].bound, 6))

# Rotation example: a single eigenvector tilted by sin(theta) = eps.
for eps in (0.1, 0.01, 0.001):
    pop, samp = gen_sharpness_rotation(eps)
    rep = evaluate_symmetric(pop, samp, BlockSelection(1, 1))
    c = rep["corollary_sin"]
    dist = rep["corollary_vector"].observed
    print(f"rotation eps={eps:<6} sin theta {c.observed:.6g}  bound {c.bound:.6g}  ratio {c.ratio:.3f}"
          f"  |vhat - v|^2 {dist**2:.6g} vs {2 - 2 * np.sqrt(1 - eps**2):.6g}")
