"""Rational inner approximation of contractive matrix functions on the disc and bidisc."""

from .core import (
    Colligation,
    MatrixPolynomial,
    BidiscSplit,
    CircleGrid,
    TorusGrid,
    Check,
    evaluate_on,
    transfer_on_points,
    operator_norm,
    defect_operators,
    psd_sqrt,
    is_contraction,
    is_unitary,
    random_unitary,
    random_contraction,
    random_colligation,
    cascade,
    mobius_compose,
    sup_norm_estimate,
)
from .realization import (
    contractive_realization,
    realize_contractive,
    strictify,
    negative_squares,
    kernel_sample,
    schur_kernel,
    j_schur_kernel,
    contractive_polynomial,
    taylor_coefficients,
    polynomial_sup_norm,
)
from .spectral import (
    spectral_factor,
)
from .dilation import (
    DilatedColligation,
    unitary_dilation,
    unitarity_defect,
    moment,
    verify_power_dilation,
    inner_approximant_disc,
    inner_approximant_bidisc,
    bidisc_transfer,
    BidiscTransfer,
    tail_bound,
    grid_error,
    circle_unitarity_defect,
)
from .potapov import (
    BlaschkeFactor,
    BPFactor,
    BlaschkePotapovProduct,
    eval_blaschke,
    scalar_blaschke_product,
    projection_onto,
    radial_scale,
    radial_colligation,
    is_inner_on_circle,
    boundary_unitarity_defects,
    random_inner,
)
from .hull import (
    DiscGrid,
    ConvexCombination,
    AtomPool,
    default_pool,
    feedback_atoms,
    scale_average_atoms,
    scale_average_bound,
    combine_products,
    unitary_left_multiply,
    fw_decompose,
    fisher_pipeline,
)
from .indefinite import (
    SignatureSpace,
    PGTransformed,
    pg_transform,
    pg_inverse,
    pg_values,
    pg_inverse_values,
    pg_roundtrip_defect,
    verify_pg_kernel_identity,
    is_j_contractive,
    j_unitarity_defects,
    pg_negative_squares,
    JInnerApproximant,
    j_inner_approximate,
    KreinLangerPair,
    KreinLangerApproximant,
    krein_langer_approximate,
    right_krein_langer_approximate,
    krein_langer_from_poles,
    j_krein_langer_approximate,
)
from .domains import (
    GammaPoint,
    TetraPoint,
    in_gamma,
    on_bgamma,
    in_tetra,
    on_btetra,
    GammaMap,
    TetraMap,
    gamma_inner_approximate,
    tetra_inner_approximate,
)
from .estimators import (
    ContractiveRealization,
    InnerApproximant,
    FisherDecomposition,
    PotapovGinzburg,
)
from .errors import (
    InnerApproxError,
    DimensionMismatch,
    NotSquare,
    NotContractive,
    NotContractiveInput,
    NotUnitary,
    NotInner,
    InvalidRadius,
    DepthTooSmall,
    IndexOutOfRange,
    NumericalFailure,
    SingularResolvent,
    SingularBlock,
    DegenerateDenominator,
    PoleHit,
    CornerDegenerate,
    BudgetExhausted,
    RankDeficiencyWarning,
    ParseError,
    InvariantViolation,
)
from . import io

__version__ = "0.1.0"

__all__ = [
    "Colligation",
    "MatrixPolynomial",
    "BidiscSplit",
    "CircleGrid",
    "TorusGrid",
    "Check",
    "evaluate_on",
    "transfer_on_points",
    "operator_norm",
    "defect_operators",
    "psd_sqrt",
    "is_contraction",
    "is_unitary",
    "random_unitary",
    "random_contraction",
    "random_colligation",
    "cascade",
    "mobius_compose",
    "sup_norm_estimate",
    "contractive_realization",
    "realize_contractive",
    "strictify",
    "negative_squares",
    "kernel_sample",
    "schur_kernel",
    "j_schur_kernel",
    "contractive_polynomial",
    "taylor_coefficients",
    "polynomial_sup_norm",
    "spectral_factor",
    "DilatedColligation",
    "unitary_dilation",
    "unitarity_defect",
    "moment",
    "verify_power_dilation",
    "inner_approximant_disc",
    "inner_approximant_bidisc",
    "bidisc_transfer",
    "BidiscTransfer",
    "tail_bound",
    "grid_error",
    "circle_unitarity_defect",
    "BlaschkeFactor",
    "BPFactor",
    "BlaschkePotapovProduct",
    "eval_blaschke",
    "scalar_blaschke_product",
    "projection_onto",
    "radial_scale",
    "radial_colligation",
    "is_inner_on_circle",
    "boundary_unitarity_defects",
    "random_inner",
    "DiscGrid",
    "ConvexCombination",
    "AtomPool",
    "default_pool",
    "feedback_atoms",
    "scale_average_atoms",
    "scale_average_bound",
    "combine_products",
    "unitary_left_multiply",
    "fw_decompose",
    "fisher_pipeline",
    "SignatureSpace",
    "PGTransformed",
    "pg_transform",
    "pg_inverse",
    "pg_values",
    "pg_inverse_values",
    "pg_roundtrip_defect",
    "verify_pg_kernel_identity",
    "is_j_contractive",
    "j_unitarity_defects",
    "pg_negative_squares",
    "JInnerApproximant",
    "j_inner_approximate",
    "KreinLangerPair",
    "KreinLangerApproximant",
    "krein_langer_approximate",
    "right_krein_langer_approximate",
    "krein_langer_from_poles",
    "j_krein_langer_approximate",
    "GammaPoint",
    "TetraPoint",
    "in_gamma",
    "on_bgamma",
    "in_tetra",
    "on_btetra",
    "GammaMap",
    "TetraMap",
    "gamma_inner_approximate",
    "tetra_inner_approximate",
    "ContractiveRealization",
    "InnerApproximant",
    "FisherDecomposition",
    "PotapovGinzburg",
    "InnerApproxError",
    "DimensionMismatch",
    "NotSquare",
    "NotContractive",
    "NotContractiveInput",
    "NotUnitary",
    "NotInner",
    "InvalidRadius",
    "DepthTooSmall",
    "IndexOutOfRange",
    "NumericalFailure",
    "SingularResolvent",
    "SingularBlock",
    "DegenerateDenominator",
    "PoleHit",
    "CornerDegenerate",
    "BudgetExhausted",
    "RankDeficiencyWarning",
    "ParseError",
    "InvariantViolation",
    "io",
]
