from .linear_map import Linearity, LinearMapHandle, identity_handle, op_norm_estimate
from .local_covering import (
    commutative_grid_transform,
    inverse_grid_transform,
    local_covering_check_theta0,
)
from .schemas import (
    DiracParams,
    GnsVector,
    GnsWindow,
    NormEstimate,
    SeminormEstimate,
    SpinorVector,
)
from .spectral_triple import (
    analytic_dirac_spectrum,
    check_first_order,
    check_real_structure,
    check_self_adjointness,
    check_sign_table,
    commutator_with_dirac,
    dirac_apply,
    dirac_operator,
    dirac_spectrum,
    gamma_apply,
    grading_operator,
    j_apply,
    multiplication_matrix,
    opposite_action,
    pi_s_representation,
    real_structure,
    represent,
    seminorm,
    tomita_apply,
)

__all__ = [
    "DiracParams",
    "GnsVector",
    "GnsWindow",
    "LinearMapHandle",
    "Linearity",
    "NormEstimate",
    "SeminormEstimate",
    "SpinorVector",
    "analytic_dirac_spectrum",
    "check_first_order",
    "check_real_structure",
    "check_self_adjointness",
    "check_sign_table",
    "commutative_grid_transform",
    "commutator_with_dirac",
    "dirac_apply",
    "dirac_operator",
    "dirac_spectrum",
    "gamma_apply",
    "grading_operator",
    "identity_handle",
    "inverse_grid_transform",
    "j_apply",
    "local_covering_check_theta0",
    "multiplication_matrix",
    "op_norm_estimate",
    "opposite_action",
    "pi_s_representation",
    "real_structure",
    "represent",
    "seminorm",
    "tomita_apply",
]
