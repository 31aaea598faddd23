from .dirac_stream import (
    dirac_integral,
    dirac_inverse_power_stream,
    verify_covering_scaling,
    weyl_integral_prediction,
)
from .dixmier_trace import (
    direct_sum,
    l1plus_norm,
    ncint_estimate,
    read_stream_csv,
    scale,
    sigma_curve,
    sigma_lambda,
    sigma_n,
    tau_lambda,
    write_stream_csv,
)
from .schemas import DixmierEstimate, QuadratureEstimate, SingularValueStream

__all__ = [
    "DixmierEstimate",
    "QuadratureEstimate",
    "SingularValueStream",
    "dirac_integral",
    "dirac_inverse_power_stream",
    "direct_sum",
    "l1plus_norm",
    "ncint_estimate",
    "read_stream_csv",
    "scale",
    "sigma_curve",
    "sigma_lambda",
    "sigma_n",
    "tau_lambda",
    "verify_covering_scaling",
    "weyl_integral_prediction",
    "write_stream_csv",
]
