"""Subspace distances and Davis-Kahan-type perturbation bounds."""

from .bounds import (
    BlockSelection,
    BoundCheck,
    BoundReport,
    BoundViolation,
    GapError,
    GapInfo,
    PreconditionError,
    classical_delta,
    classical_dk_bound,
    corollary_bounds,
    evaluate_symmetric,
    population_gap,
    proof_chain,
    sharp_numerator_bounds,
    svd_factor_check,
    svd_variant_bounds,
    variant_bounds,
)
from .harness import (
    EnsembleSpec,
    gen_rectangular,
    gen_sharpness_diag,
    gen_sharpness_rotation,
    gen_spiked_symmetric,
    run_campaign,
)
from .matrix_core import (
    ConvergenceError,
    MatrixError,
    SpectralDecomposition,
    SvdFactorization,
    frobenius_norm,
    kron,
    operator_norm,
    orthonormal_complement,
    svd,
    sym_eig,
    vec,
    weyl_check,
    wielandt_hoffman_check,
)
from .subspace import (
    Alignment,
    PrincipalAngleSet,
    orient_sign,
    principal_angles,
    procrustes_align,
    sin2theta_identity_check,
    sin_theta_frobenius,
    sin_theta_operator,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSelection",
    "BoundCheck",
    "BoundReport",
    "BoundViolation",
    "GapError",
    "GapInfo",
    "PreconditionError",
    "classical_delta",
    "classical_dk_bound",
    "corollary_bounds",
    "evaluate_symmetric",
    "population_gap",
    "proof_chain",
    "sharp_numerator_bounds",
    "svd_factor_check",
    "svd_variant_bounds",
    "variant_bounds",
    "EnsembleSpec",
    "gen_rectangular",
    "gen_sharpness_diag",
    "gen_sharpness_rotation",
    "gen_spiked_symmetric",
    "run_campaign",
    "ConvergenceError",
    "MatrixError",
    "SpectralDecomposition",
    "SvdFactorization",
    "frobenius_norm",
    "kron",
    "operator_norm",
    "orthonormal_complement",
    "svd",
    "sym_eig",
    "vec",
    "weyl_check",
    "wielandt_hoffman_check",
    "Alignment",
    "PrincipalAngleSet",
    "orient_sign",
    "principal_angles",
    "procrustes_align",
    "sin2theta_identity_check",
    "sin_theta_frobenius",
    "sin_theta_operator",
]
