from .schemas import AlgebraElement, DeformationAngle, Monomial
from .torus_algebra import (
    adjoint,
    delta1,
    delta2,
    dirac_multiplier,
    ensure_complex_tau,
    ensure_same_angle,
    generators,
    gns_inner,
    monomial,
    normal_order_product,
    partial_tau,
    partial_tau_dagger,
    rapid_decay_seminorm,
    scaled_derivations,
    trace_tau0,
    unit,
    zero,
)

__all__ = [
    "AlgebraElement",
    "DeformationAngle",
    "Monomial",
    "adjoint",
    "delta1",
    "delta2",
    "dirac_multiplier",
    "ensure_complex_tau",
    "ensure_same_angle",
    "generators",
    "gns_inner",
    "monomial",
    "normal_order_product",
    "partial_tau",
    "partial_tau_dagger",
    "rapid_decay_seminorm",
    "scaled_derivations",
    "trace_tau0",
    "unit",
    "zero",
]
