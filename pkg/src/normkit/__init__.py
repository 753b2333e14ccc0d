"""Normality preserving perturbations and augmentations of normal matrices."""

from .augment import (
    Augmentation1,
    QuadAugmentation,
    augment1,
    block_identity_residuals,
    eigfree_augment,
    extract_augmentation1,
    predict_augment1_spectrum,
    quad_augment,
)
from .core import (
    DEFAULT_TOL,
    InfeasibleError,
    NormkitError,
    NumericalError,
    PreconditionError,
    ShapeError,
    Tolerance,
    commutator,
    hermitian_eig,
    is_normal,
    normality_defect,
    random_normal,
)
from .curve import (
    CurveRegion,
    PolyCurve,
    RealPolynomial,
    classify_point,
    curve_identity_residual,
    krylov_pi,
    lagrange_pi,
    spectral_curve,
)
from .perturb import (
    LineScan,
    Rank1Perturbation,
    RankKPerturbation,
    SpectrumPrediction,
    build_rank1,
    check_sum_normal,
    combined_perturbation,
    decompose_rank_k,
    normal_line_scan,
    predict_rank1_spectrum,
    trajectory,
    validate_rank1,
)
from .spectral import (
    EigenLine,
    NormalEigenDecomposition,
    SimDiag,
    feasible_theta,
    group_on_line,
    normal_eig,
    simultaneous_diag,
)
from .toeplitz import (
    EssentiallyHermitianCert,
    ThetaDecomposition,
    essentially_hermitian,
    is_theta_hermitian,
    theta_split,
    theta_split_scalar,
)

__version__ = "0.1.0"

__all__ = [
    "augment1",
    "Augmentation1",
    "block_identity_residuals",
    "build_rank1",
    "check_sum_normal",
    "classify_point",
    "combined_perturbation",
    "commutator",
    "curve_identity_residual",
    "CurveRegion",
    "decompose_rank_k",
    "DEFAULT_TOL",
    "EigenLine",
    "eigfree_augment",
    "essentially_hermitian",
    "EssentiallyHermitianCert",
    "extract_augmentation1",
    "feasible_theta",
    "group_on_line",
    "hermitian_eig",
    "InfeasibleError",
    "is_normal",
    "is_theta_hermitian",
    "krylov_pi",
    "lagrange_pi",
    "LineScan",
    "normal_eig",
    "normal_line_scan",
    "NormalEigenDecomposition",
    "normality_defect",
    "NormkitError",
    "NumericalError",
    "PolyCurve",
    "PreconditionError",
    "predict_augment1_spectrum",
    "predict_rank1_spectrum",
    "quad_augment",
    "QuadAugmentation",
    "random_normal",
    "Rank1Perturbation",
    "RankKPerturbation",
    "RealPolynomial",
    "ShapeError",
    "SimDiag",
    "simultaneous_diag",
    "spectral_curve",
    "SpectrumPrediction",
    "theta_split",
    "theta_split_scalar",
    "ThetaDecomposition",
    "Tolerance",
    "trajectory",
    "validate_rank1",
]
