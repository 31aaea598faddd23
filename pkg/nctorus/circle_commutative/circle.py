"""Circle: smooth partitions of unity on S^1 and their lifts to finite covers.

The evenly covered neighbourhoods are the images of (-pi - 1/2, 1/2) and
(-1/2, pi + 1/2). The partition roots are e_1 = cos(pi h / 2), e_2 = sin(pi h / 2)
for a smooth transition h that vanishes outside U_2 and equals 1 outside U_1,
so e_1^2 + e_2^2 = 1 holds pointwise by construction.
"""

import logging

import numpy as np

from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.reports import AxiomReport

from .schemas import CircleFunction, LiftedFamily, PartitionPair

logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi
MIN_GRID = 64
U1 = (-np.pi - 0.5, 0.5)
U2 = (-0.5, np.pi + 0.5)
DEFAULT_CIRC_TOLERANCE = 1e-12
DEFAULT_TAIL_TOLERANCE = 1e-9
DEFAULT_DROP_BELOW = 1e-15


def _sigma(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    safe = np.where(t > 0, t, 1.0)
    return np.where(t > 0, np.exp(-1.0 / safe), 0.0)


def smooth_step(t: np.ndarray) -> np.ndarray:
    """C^infinity step: 0 for t <= 0, 1 for t >= 1."""
    left, right = _sigma(t), _sigma(1.0 - np.asarray(t, dtype=np.float64))
    return left / (left + right)


def transition_profile(x: np.ndarray) -> np.ndarray:
    """Smooth h with support in U_2 and h = 1 on [1/2, pi - 1/2] (mod 2 pi)."""
    y = np.mod(np.asarray(x, dtype=np.float64) + 0.5, TWO_PI) - 0.5
    return smooth_step(y + 0.5) * (1.0 - smooth_step(y - np.pi + 0.5))


def build_partition(grid: int = 4096, cutoff: int = 256) -> PartitionPair:
    """Sample the smooth partition pair on a uniform grid of the circle.

    Args:
        grid: Samples P per circle, at least 64.
        cutoff: Fourier cutoff K, at most P / 2.

    Returns:
        PartitionPair: a_i = e_i^2 together with e_1, e_2.

    Raises:
        NcgException: RESOLUTION when the grid cannot resolve the supports or the cutoff.
    """
    if grid < MIN_GRID or cutoff < 1 or 2 * cutoff > grid:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.RESOLUTION,
                error_message=f"Need grid >= {MIN_GRID} and 1 <= cutoff <= grid / 2.",
                context={"grid": grid, "cutoff": cutoff},
            )
        )
    x = TWO_PI * np.arange(grid) / grid
    h = transition_profile(x)
    e1 = np.sin(0.5 * np.pi * (1.0 - h))
    e2 = np.sin(0.5 * np.pi * h)
    return PartitionPair(
        a1=CircleFunction(samples=e1 * e1, label="a1"),
        a2=CircleFunction(samples=e2 * e2, label="a2"),
        e1=CircleFunction(samples=e1, label="e1"),
        e2=CircleFunction(samples=e2, label="e2"),
        cutoff=cutoff,
    )


def _lift_mask(grid: int, fold: int, interval: tuple[float, float]) -> np.ndarray:
    """Cover points lying in the chosen lift of an evenly covered interval."""
    x = TWO_PI * np.arange(grid * fold) / grid
    lo, hi = interval
    z = np.mod(x - lo, TWO_PI * fold) + lo
    return (z > lo) & (z < hi)


def lift_to_cover(p: PartitionPair, n: int) -> LiftedFamily:
    """Lift the partition roots to the n-fold cover and translate by Z_n.

    e~_i agrees with e_i on the lift of U_i through sheet 0 and vanishes elsewhere;
    e^n_(g, i) is its translate by g.

    Raises:
        NcgException: CONFIG_INVALID for n < 1.
    """
    if n < 1:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Fold must be a positive integer.",
                context={"fold": n},
            )
        )
    grid = p.grid
    functions = {}
    for i, (root, interval) in enumerate(((p.e1, U1), (p.e2, U2)), start=1):
        base = np.tile(root.samples, n) * _lift_mask(grid, n, interval)
        for g in range(n):
            functions[(g, i)] = np.roll(base, grid * g)
    return LiftedFamily(fold=n, grid=grid, functions=functions)


def lift_to_line(p: PartitionPair, window: int) -> LiftedFamily:
    """Lift the partition roots to a window of 2W + 1 sheets of the line R -> S^1.

    Sheet 0 sits in the middle of the window; the lift through sheet g is e~_i
    translated by g, truncated where it leaves the window.

    Raises:
        NcgException: CONFIG_INVALID for W < 1.
    """
    if window < 1:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Line window must contain at least one sheet on each side.",
                context={"window": window},
            )
        )
    grid, fold = p.grid, 2 * window + 1
    x = TWO_PI * np.arange(grid * fold) / grid - TWO_PI * window
    family = LiftedFamily(fold=fold, grid=grid, functions={}, periodic=False)
    functions = {}
    for i, (root, (lo, hi)) in enumerate(((p.e1, U1), (p.e2, U2)), start=1):
        base = np.tile(root.samples, fold) * ((x > lo) & (x < hi))
        for g in range(-window, window + 1):
            functions[(g, i)] = family.translate(base, g)
    return family.model_copy(update={"functions": functions})


def verify_circ_sum(f: LiftedFamily, tolerance: float = DEFAULT_CIRC_TOLERANCE) -> AxiomReport:
    """Check sum_iota e_iota (g e_iota) = delta_{g, e} pointwise for every deck g.

    Line windows are checked away from their two truncated end sheets.
    """
    interior = f.interior()
    components = {}
    for g in f.deck():
        total = np.zeros(f.fold * f.grid, dtype=np.complex128)
        for index in f.indices():
            e = f.functions[index]
            total += np.conj(e) * f.translate(e, g)
        target = 1.0 if g == 0 else 0.0
        components[f"g={g}"] = float(np.max(np.abs(total[interior] - target)))
    return AxiomReport(
        axiom="circle-covering-sum",
        residual=max(components.values()),
        tolerance=tolerance,
        window=f.grid,
        components=components,
        notes=[f"fold {f.fold}" if f.periodic else f"line window {f.window}"],
    )


def fourier_tail(f: CircleFunction, cutoff: int) -> float:
    """Largest Fourier coefficient modulus beyond the cutoff."""
    spectrum = f.spectrum()
    j = np.fft.fftfreq(f.size, d=1.0 / f.size)
    beyond = np.abs(j) > cutoff
    return float(np.max(np.abs(spectrum[beyond]))) if np.any(beyond) else 0.0


def functional_calculus_coeffs(
    f: CircleFunction,
    cutoff: int,
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE,
    drop_below: float = DEFAULT_DROP_BELOW,
) -> dict[int, complex]:
    """Truncated Fourier series of f, so that f(u) = sum c_j u^j.

    Coefficients of modulus at most ``drop_below`` are omitted. A warning is
    logged when the discarded tail exceeds ``tail_tolerance``.
    """
    coeffs = f.coefficients(cutoff)
    tail = fourier_tail(f, cutoff)
    if tail > tail_tolerance:
        logger.warning(
            "Fourier tail of %s beyond %d is %.3e (tolerance %.1e)",
            f.label or "function",
            cutoff,
            tail,
            tail_tolerance,
        )
    return {
        int(j): complex(c)
        for j, c in zip(range(-cutoff, cutoff + 1), coeffs)
        if abs(c) > drop_below
    }


def reconstruct(coeffs: dict[int, complex], grid: int, fold: int = 1) -> CircleFunction:
    """Evaluate sum c_j e^{i j phi} on the sample points of an n-fold cover."""
    size = grid * fold
    spectrum = np.zeros(size, dtype=np.complex128)
    for j, c in coeffs.items():
        spectrum[j % size] += c
    return CircleFunction(samples=np.fft.ifft(spectrum) * size, fold=fold)


def _require_same_cover(xi: CircleFunction, eta: CircleFunction) -> None:
    if xi.fold != eta.fold or xi.size != eta.size:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.WINDOW_MISMATCH,
                error_message="Functions live on different covers or grids.",
                context={"left": (xi.fold, xi.size), "right": (eta.fold, eta.size)},
            )
        )


def l2_module_inner(xi: CircleFunction, eta: CircleFunction) -> CircleFunction:
    """Fiber sum <xi, eta>(x) = sum over the n preimages of conj(xi) eta."""
    _require_same_cover(xi, eta)
    product = np.conj(xi.samples) * eta.samples
    return CircleFunction(
        samples=product.reshape(xi.fold, xi.grid).sum(axis=0), label="module-inner"
    )


def descend_function(f: CircleFunction, relative_fold: int) -> CircleFunction:
    """Fiber sum over the relative deck group from an N-fold to an N/r-fold cover.

    Raises:
        NcgException: CONFIG_INVALID unless r divides the fold.
    """
    if relative_fold < 1 or f.fold % relative_fold:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Relative fold must divide the fold of the function.",
                context={"fold": f.fold, "relative_fold": relative_fold},
            )
        )
    lower = f.fold // relative_fold
    samples = f.samples.reshape(relative_fold, lower * f.grid).sum(axis=0)
    return f.with_samples(samples, fold=lower)


def lift_to_sheet(f: CircleFunction, n: int, sheet: int = 0) -> CircleFunction:
    """Place a base function on one sheet of the n-fold cover, zero elsewhere."""
    if f.fold != 1 or not 0 <= sheet < n:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Need a base function and a sheet in [0, n).",
                context={"fold": f.fold, "n": n, "sheet": sheet},
            )
        )
    samples = np.zeros(n * f.grid, dtype=np.complex128)
    samples[sheet * f.grid : (sheet + 1) * f.grid] = f.samples
    return f.with_samples(samples, fold=n)


def pullback(f: CircleFunction, n: int) -> CircleFunction:
    """The deck-invariant lift f o pi to the n-fold cover."""
    if f.fold != 1 or n < 1:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Pullback needs a base function and n >= 1.",
                context={"fold": f.fold, "n": n},
            )
        )
    return f.with_samples(np.tile(f.samples, n), fold=n)


def function_table(f: CircleFunction) -> np.ndarray:
    """Columns (x, re, im) of the grid-function interchange format."""
    return np.column_stack([f.grid_points(), f.samples.real, f.samples.imag])


def function_from_table(table: np.ndarray, fold: int = 1, label: str = "") -> CircleFunction:
    """Parse (x, re, im) rows back into a circle function.

    Raises:
        NcgException: RESOLUTION when the x column is not the uniform grid.
    """
    table = np.asarray(table, dtype=np.float64).reshape(-1, 3)
    f = CircleFunction(samples=table[:, 1] + 1j * table[:, 2], fold=fold, label=label)
    if not np.allclose(table[:, 0], f.grid_points(), rtol=0.0, atol=1e-9):
        raise NcgException(
            NcgError(
                error_code=ErrorCode.RESOLUTION,
                error_message="Sample positions do not form the uniform grid.",
                context={"size": f.size, "fold": fold},
            )
        )
    return f


def coefficients_to_json(coeffs: dict[int, complex]) -> dict[str, dict[str, float]]:
    """Fourier coefficients keyed by their integer index."""
    return {
        str(j): {"re": float(c.real), "im": float(c.imag)} for j, c in sorted(coeffs.items())
    }


def coefficients_from_json(payload: dict[str, dict[str, float]]) -> dict[int, complex]:
    """Inverse of coefficients_to_json."""
    return {
        int(j): complex(value.get("re", 0.0), value.get("im", 0.0))
        for j, value in payload.items()
    }
