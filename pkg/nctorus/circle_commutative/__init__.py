from .circle import (
    U1,
    U2,
    build_partition,
    coefficients_from_json,
    coefficients_to_json,
    descend_function,
    fourier_tail,
    function_from_table,
    function_table,
    functional_calculus_coeffs,
    l2_module_inner,
    lift_to_cover,
    lift_to_line,
    lift_to_sheet,
    pullback,
    reconstruct,
    smooth_step,
    transition_profile,
    verify_circ_sum,
)
from .schemas import CircleFunction, LiftedFamily, PartitionPair

__all__ = [
    "U1",
    "U2",
    "CircleFunction",
    "LiftedFamily",
    "PartitionPair",
    "build_partition",
    "coefficients_from_json",
    "coefficients_to_json",
    "descend_function",
    "fourier_tail",
    "function_from_table",
    "function_table",
    "functional_calculus_coeffs",
    "l2_module_inner",
    "lift_to_cover",
    "lift_to_line",
    "lift_to_sheet",
    "pullback",
    "reconstruct",
    "smooth_step",
    "transition_profile",
    "verify_circ_sum",
]
