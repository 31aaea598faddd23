"""Singular value functionals and the extrapolated noncommutative integral.

sigma_lambda is the piecewise-linear interpolation of the partial sums sigma_n
through sigma_0 = 0, which also gives sigma_lambda = lambda ||T|| on (0, 1].
The Cesaro mean tau_lambda is integrated in the variable s = log u, where it reads
(1 / log lambda) * integral_1^{log lambda} sigma_{e^s} / s ds.
"""

import logging
import math
from typing import Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.utils.tabular import PathOrStream, read_csv_rows, write_csv

from .schemas import DixmierEstimate, QuadratureEstimate, SingularValueStream

logger = logging.getLogger(__name__)

DEFAULT_NODES_PER_UNIT = 512
POOR_FIT_RTOL = 1e-4
UPPER_DECADE = math.log(10.0)

ArrayLike = Union[float, np.ndarray]


def _config_error(message: str, **context) -> NcgException:
    return NcgException(
        NcgError(error_code=ErrorCode.CONFIG_INVALID, error_message=message, context=context)
    )


def _require_length(sv: SingularValueStream, needed: float) -> None:
    """Raise STREAM_TOO_SHORT when a truncated stream does not reach index ``needed``."""
    if sv.finite_rank or len(sv) >= math.ceil(needed):
        return
    raise NcgException(
        NcgError(
            error_code=ErrorCode.STREAM_TOO_SHORT,
            error_message="The stream does not reach the requested index.",
            context={"needed": int(math.ceil(needed)), "length": len(sv), "provenance": sv.provenance},
        )
    )


def _partial_sums(sv: SingularValueStream) -> np.ndarray:
    return np.concatenate([[0.0], np.cumsum(sv.values)])


def sigma_n(sv: SingularValueStream, n: int) -> float:
    """Sum of the n largest singular values.

    Raises:
        NcgException: CONFIG_INVALID for n < 1, STREAM_TOO_SHORT past a truncated stream.
    """
    if int(n) < 1:
        raise _config_error("n must be a positive integer.", n=n)
    _require_length(sv, n)
    return float(np.sum(sv.values[: int(n)]))


def sigma_curve(sv: SingularValueStream, lam: ArrayLike) -> np.ndarray:
    """Vectorized sigma_lambda over an array of positive lambda."""
    lam = np.asarray(lam, dtype=np.float64)
    if np.any(lam <= 0):
        raise _config_error("lambda must be positive.", lam=float(np.min(lam)))
    _require_length(sv, float(np.max(lam, initial=0.0)))
    sums = _partial_sums(sv)
    return np.interp(lam, np.arange(sums.size, dtype=np.float64), sums)


def sigma_lambda(sv: SingularValueStream, lam: float) -> float:
    """sigma_lambda = (1 - t) sigma_n + t sigma_{n+1} for lambda = n + t.

    For 0 < lambda <= 1 this is lambda ||T||.
    """
    return float(sigma_curve(sv, np.array([lam]))[0])


def _cesaro_curve(
    sv: SingularValueStream, lam: float, nodes_per_unit: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """tau on a uniform grid in s = log u over [1, log lam] with pointwise error bounds.

    Returns:
        (s, tau, error) where error is the Richardson estimate against half resolution.
    """
    if lam < math.e:
        raise _config_error("lambda must be at least e.", lam=lam)
    _require_length(sv, lam)
    top = math.log(lam)
    intervals = max(2, 2 * math.ceil((top - 1.0) * nodes_per_unit / 2))
    s = np.linspace(1.0, top, intervals + 1)
    u = np.exp(s)
    u[0], u[-1] = math.e, lam
    integrand = sigma_curve(sv, u) / s
    fine = cumulative_trapezoid(integrand, s, initial=0.0)
    coarse = cumulative_trapezoid(integrand[::2], s[::2], initial=0.0)
    error = np.interp(s, s[::2], np.abs(fine[::2] - coarse) / 3.0)
    return s, fine / s, error / s


def tau_lambda(
    sv: SingularValueStream, lam: float, nodes_per_unit: int = DEFAULT_NODES_PER_UNIT
) -> QuadratureEstimate:
    """Cesaro mean tau_lambda(T) = (1 / log lambda) integral_e^lambda sigma_u / log u du / u.

    Raises:
        NcgException: CONFIG_INVALID for lambda < e, STREAM_TOO_SHORT when the
            stream does not reach lambda.
    """
    s, tau, error = _cesaro_curve(sv, float(lam), nodes_per_unit)
    return QuadratureEstimate(
        value=float(tau[-1]), error=float(error[-1]), at=float(lam), nodes=int(s.size)
    )


def ncint_estimate(
    sv: SingularValueStream,
    lambda_max: float,
    nodes_per_unit: int = DEFAULT_NODES_PER_UNIT,
    poor_fit_rtol: float = POOR_FIT_RTOL,
) -> DixmierEstimate:
    """Extrapolate lim tau_lambda from the decade [lambda_max / 10, lambda_max].

    Least squares fit of tau_lambda by c + (b + b' log log lambda) / log lambda;
    the estimate is c. A warning is logged when the largest fit deviation exceeds
    ``poor_fit_rtol`` relative to the size of tau.

    Args:
        sv: Singular values of a measurable operator.
        lambda_max: Upper end of the fit, at least 10 e.
        nodes_per_unit: Quadrature nodes per unit of log lambda.
        poor_fit_rtol: Relative threshold of the poor-fit warning.

    Returns:
        DixmierEstimate: The limit with its fit diagnostics.

    Raises:
        NcgException: CONFIG_INVALID for lambda_max < 10 e, STREAM_TOO_SHORT when the
            stream does not reach lambda_max.
    """
    lambda_max = float(lambda_max)
    if lambda_max < 10.0 * math.e:
        raise _config_error("lambda_max must be at least 10 e.", lambda_max=lambda_max)
    s, tau, error = _cesaro_curve(sv, lambda_max, nodes_per_unit)
    fitted = s >= s[-1] - UPPER_DECADE
    x, y = s[fitted], tau[fitted]
    design = np.column_stack([np.ones_like(x), 1.0 / x, np.log(x) / x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.max(np.abs(design @ coef - y)))
    scale = float(np.max(np.abs(y)))
    if residual > poor_fit_rtol * scale:
        logger.warning(
            "Poor Dixmier fit for %s: residual %.3e against |tau| %.3e",
            sv.provenance,
            residual,
            scale,
        )
    return DixmierEstimate(
        value=float(coef[0]),
        fit_b=float(coef[1]),
        fit_b_loglog=float(coef[2]),
        fit_residual=residual,
        lambda_min=float(math.exp(x[0])),
        lambda_max=lambda_max,
        tau_at_max=float(tau[-1]),
        quadrature_error=float(np.max(error[fitted])),
        provenance=sv.provenance,
    )


def l1plus_norm(sv: SingularValueStream, lambda_max: float) -> float:
    """sup over e < lambda <= lambda_max of sigma_lambda / log lambda.

    On each interval between breakpoints sigma / log has no interior maximum, so the
    supremum is taken over e, the integers in between and lambda_max.
    """
    if lambda_max <= math.e:
        raise _config_error("lambda_max must exceed e.", lambda_max=lambda_max)
    points = np.concatenate(
        [[math.e], np.arange(3.0, math.floor(lambda_max) + 1.0), [float(lambda_max)]]
    )
    return float(np.max(sigma_curve(sv, points) / np.log(points)))


def direct_sum(a: SingularValueStream, b: SingularValueStream) -> SingularValueStream:
    """Singular values of A (+) B, the merged stream.

    For truncated inputs only the part of the merge that no unseen value can
    overtake is kept.
    """
    merged = np.sort(np.concatenate([a.values, b.values]))[::-1]
    finite_rank = a.finite_rank and b.finite_rank
    if not finite_rank:
        floors = [sv.values[-1] if sv.values.size else 0.0 for sv in (a, b) if not sv.finite_rank]
        merged = merged[merged >= max(floors)]
    return SingularValueStream(
        values=merged,
        provenance=f"({a.provenance}) + ({b.provenance})",
        finite_rank=finite_rank,
    )


def scale(sv: SingularValueStream, factor: float) -> SingularValueStream:
    """Singular values of factor * T for factor >= 0."""
    if factor < 0:
        raise _config_error("Scaling factor must be nonnegative.", factor=factor)
    return sv.model_copy(
        update={"values": sv.values * float(factor), "provenance": f"{factor:g} * {sv.provenance}"}
    )


def write_stream_csv(sv: SingularValueStream, target: PathOrStream) -> None:
    """Write the stream as (index, value) rows, indices starting at 1."""
    write_csv(target, ("index", "value"), zip(range(1, len(sv) + 1), sv.values.tolist()))


def read_stream_csv(
    source: PathOrStream, provenance: str = "csv", finite_rank: bool = True
) -> SingularValueStream:
    """Parse (index, value) rows back into a stream.

    Raises:
        NcgException: CONFIG_INVALID when the indices are not 1, 2, 3, ...
    """
    rows = read_csv_rows(source)
    indices = [int(row["index"]) for row in rows]
    if indices != list(range(1, len(rows) + 1)):
        raise _config_error("Stream indices must run 1, 2, 3, ...", rows=len(rows))
    return SingularValueStream(
        values=[float(row["value"]) for row in rows],
        provenance=provenance,
        finite_rank=finite_rank,
    )
