from .completeness import covering_partition_elements, verify_covering_completeness
from .coverings import (
    Normalization,
    base_angle,
    composite,
    embed,
    group_act,
    group_elements,
    group_phases,
    group_sum,
    invariant_average,
    isotypic_decomposition,
    module_inner,
    orthogonal_split,
    restrict,
    theta_prime,
)
from .schemas import (
    CoherentPrefix,
    CoveringParams,
    GroupElement,
    InnerTrajectory,
    TowerSpec,
)
from .tower import (
    coherence_check,
    corrupt_prefix,
    descend,
    descent_prefix,
    limit_inner_estimate,
    quotient_map,
    segment,
    translate_orthogonal_element,
)

__all__ = [
    "CoherentPrefix",
    "CoveringParams",
    "GroupElement",
    "InnerTrajectory",
    "Normalization",
    "TowerSpec",
    "base_angle",
    "coherence_check",
    "composite",
    "corrupt_prefix",
    "covering_partition_elements",
    "descend",
    "descent_prefix",
    "embed",
    "group_act",
    "group_elements",
    "group_phases",
    "group_sum",
    "invariant_average",
    "isotypic_decomposition",
    "limit_inner_estimate",
    "module_inner",
    "orthogonal_split",
    "quotient_map",
    "restrict",
    "segment",
    "theta_prime",
    "translate_orthogonal_element",
    "verify_covering_completeness",
]
