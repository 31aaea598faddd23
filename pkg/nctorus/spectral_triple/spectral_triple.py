"""Spectral Triple: the truncated torus spectral triple and its axiom checks.

The Hilbert space is H = L^2(A_theta, tau_0) + L^2(A_theta, tau_0) truncated to a
window of monomials. The algebra acts diagonally by left multiplication, the Dirac
operator is D = [[0, partial^dagger], [partial, 0]], the real structure is
J = [[0, -J_0], [J_0, 0]] and the grading is diag(1, -1).

Left multiplication is only exact on vectors whose image stays inside the window,
so every axiom check is restricted to the guarded interior of radius N - g.
"""

import logging
from typing import Optional

import numpy as np
from scipy import sparse

from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.reports import AxiomReport
from nctorus.torus_algebra import (
    AlgebraElement,
    adjoint,
    dirac_multiplier,
    partial_tau,
    partial_tau_dagger,
)

from .linear_map import LinearMapHandle, Linearity, op_norm_estimate
from .schemas import DiracParams, GnsWindow, SeminormEstimate, SpinorVector

logger = logging.getLogger(__name__)

DEFAULT_AXIOM_TOLERANCE = 1e-12
DEFAULT_PI_S_CAP = 4
# power iteration on residual operators only needs the order of magnitude
RESIDUAL_RTOL = 1e-3
RESIDUAL_ATOL = 1e-17


def multiplication_matrix(a: AlgebraElement, window: GnsWindow) -> sparse.csr_matrix:
    """Sparse matrix of left multiplication by a, truncated to the window."""
    r2, s2 = window.basis()
    columns = np.arange(window.dimension)
    if a.is_zero():
        return sparse.csr_matrix((window.dimension, window.dimension), dtype=np.complex128)
    rows = window.flat_index(a.r[:, None] + r2[None, :], a.s[:, None] + s2[None, :])
    values = a.amplitudes[:, None] * a.angle.twist(a.s[:, None] * r2[None, :])
    cols = np.broadcast_to(columns[None, :], rows.shape)
    keep = rows >= 0
    return sparse.csr_matrix(
        (values[keep], (rows[keep], cols[keep])),
        shape=(window.dimension, window.dimension),
    )


def _blockwise(matrix: sparse.spmatrix):
    return lambda x: np.asarray((matrix @ x.T).T)


def represent(a: AlgebraElement, window: GnsWindow, blocks: int = 2) -> LinearMapHandle:
    """The representation pi(a) = diag(a, a, ...) by left multiplication.

    Args:
        a: Algebra element.
        window: Window whose guard must cover the support of a.
        blocks: Number of GNS copies (2 for the spinor space).

    Returns:
        LinearMapHandle: Linear handle, exact on the guarded interior.

    Raises:
        NcgException: GUARD_TOO_SMALL when a's support exceeds the guard.
    """
    window.require_guard(a.support_radius, "represent")
    matrix = multiplication_matrix(a, window)
    adjoint_matrix = matrix.conj().T.tocsr()
    return LinearMapHandle(
        label=f"pi(a|{len(a.amplitudes)} terms)",
        window=window,
        blocks=blocks,
        forward=_blockwise(matrix),
        backward=_blockwise(adjoint_matrix),
    )


def dirac_multipliers(p: DiracParams, window: GnsWindow) -> np.ndarray:
    """Eigenvalue of partial on every basis monomial of the window."""
    r, s = window.basis()
    return dirac_multiplier(r, s, p.tau, p.m, p.n)


def dirac_operator(p: DiracParams, window: GnsWindow, blocks: int = 2) -> LinearMapHandle:
    """D = [[0, partial^dagger], [partial, 0]] on every spinor pair of blocks."""
    d = dirac_multipliers(p, window)
    dbar = np.conj(d)

    def forward(x: np.ndarray) -> np.ndarray:
        out = np.empty_like(x)
        out[0::2] = dbar * x[1::2]
        out[1::2] = d * x[0::2]
        return out

    return LinearMapHandle(
        label="D", window=window, blocks=blocks, forward=forward, backward=forward
    )


def dirac_apply(p: DiracParams, x: SpinorVector) -> SpinorVector:
    """Apply D: (psi1, psi2) -> (partial^dagger psi2, partial psi1)."""
    return dirac_operator(p, x.window, x.blocks)(x)


def _group_eigenvalues(values: np.ndarray) -> list[tuple[float, int]]:
    ordered = np.sort(values)
    grouped: list[tuple[float, int]] = []
    start = 0
    for i in range(1, len(ordered) + 1):
        if i == len(ordered) or abs(ordered[i] - ordered[start]) > 1e-9 * max(
            1.0, abs(ordered[start])
        ):
            block = ordered[start:i]
            grouped.append((float(block.mean()), int(len(block))))
            start = i
    grouped.sort(key=lambda item: (round(abs(item[0]), 9), item[0]))
    return grouped


def dirac_spectrum(p: DiracParams, radius: int) -> list[tuple[float, int]]:
    """Spectrum of D on the window, by diagonalizing each 2x2 monomial block.

    Returns:
        list of (eigenvalue, multiplicity) sorted ascending by absolute value.
    """
    window = GnsWindow(radius=radius)
    d = dirac_multipliers(p, window)
    blocks = np.zeros((len(d), 2, 2), dtype=np.complex128)
    blocks[:, 0, 1] = np.conj(d)
    blocks[:, 1, 0] = d
    eigenvalues = np.linalg.eigvalsh(blocks).reshape(-1)
    return _group_eigenvalues(eigenvalues)


def analytic_dirac_spectrum(p: DiracParams, radius: int) -> list[tuple[float, int]]:
    """Closed form +-2 pi |r/m + tau s/n| over the window, kernel of dimension 2."""
    window = GnsWindow(radius=radius)
    modulus = np.abs(dirac_multipliers(p, window))
    return _group_eigenvalues(np.concatenate([-modulus, modulus]))


def commutator_with_dirac(
    p: DiracParams, a: AlgebraElement, window: GnsWindow, blocks: int = 2
) -> LinearMapHandle:
    """The bounded operator [D, pi(a)] = [[0, pi(partial^dagger a)], [pi(partial a), 0]].

    D is diagonal in the monomial basis, so the truncated commutator equals the
    compression of the exact one; it is assembled from the derivatives of a.
    """
    window.require_guard(a.support_radius, "commutator_with_dirac")
    lower = multiplication_matrix(partial_tau(a, p.tau, p.m, p.n), window)
    upper = multiplication_matrix(partial_tau_dagger(a, p.tau, p.m, p.n), window)
    lower_h = lower.conj().T.tocsr()
    upper_h = upper.conj().T.tocsr()

    def forward(x: np.ndarray) -> np.ndarray:
        out = np.empty_like(x)
        out[0::2] = (upper @ x[1::2].T).T
        out[1::2] = (lower @ x[0::2].T).T
        return out

    def backward(y: np.ndarray) -> np.ndarray:
        out = np.empty_like(y)
        out[0::2] = (lower_h @ y[1::2].T).T
        out[1::2] = (upper_h @ y[0::2].T).T
        return out

    return LinearMapHandle(
        label="[D, pi(a)]", window=window, blocks=blocks, forward=forward, backward=backward
    )


def _reflection(window: GnsWindow, angle) -> tuple[np.ndarray, np.ndarray]:
    r, s = window.basis()
    permutation = window.flat_index(-r, -s)
    return permutation, angle.twist(r * s)


def tomita_apply(coefficients: np.ndarray, window: GnsWindow, angle) -> np.ndarray:
    """J_0: c w(r,s) -> conj(c) e^{-i theta r s} w(-r,-s), on the last axis."""
    permutation, phase = _reflection(window, angle)
    return np.conj(coefficients[..., permutation]) * phase


def real_structure(window: GnsWindow, angle, blocks: int = 2) -> LinearMapHandle:
    """J = [[0, -J_0], [J_0, 0]], antiunitary, with J^{-1} = -J."""

    def forward(x: np.ndarray) -> np.ndarray:
        out = np.empty_like(x)
        out[0::2] = -tomita_apply(x[1::2], window, angle)
        out[1::2] = tomita_apply(x[0::2], window, angle)
        return out

    def backward(y: np.ndarray) -> np.ndarray:
        return -forward(y)

    return LinearMapHandle(
        label="J",
        window=window,
        blocks=blocks,
        linearity=Linearity.ANTILINEAR,
        forward=forward,
        backward=backward,
    )


def j_apply(x: SpinorVector) -> SpinorVector:
    """Apply J: (psi1, psi2) -> (-J_0 psi2, J_0 psi1)."""
    return real_structure(x.window, x.angle, x.blocks)(x)


def grading_operator(window: GnsWindow, blocks: int = 2) -> LinearMapHandle:
    """Gamma = diag(+1, -1) on every spinor pair."""

    def forward(x: np.ndarray) -> np.ndarray:
        out = x.copy()
        out[1::2] = -out[1::2]
        return out

    return LinearMapHandle(
        label="Gamma", window=window, blocks=blocks, forward=forward, backward=forward
    )


def gamma_apply(x: SpinorVector) -> SpinorVector:
    """Apply Gamma: (psi1, psi2) -> (psi1, -psi2)."""
    return grading_operator(x.window, x.blocks)(x)


def opposite_action(b: AlgebraElement, window: GnsWindow, blocks: int = 2) -> LinearMapHandle:
    """J pi(b)* J^{-1}, which acts as right multiplication by b."""
    j = real_structure(window, b.angle, blocks)
    j_inverse = j.scale(-1.0)
    return j @ represent(adjoint(b), window, blocks) @ j_inverse


def _residual_norm(handle: LinearMapHandle, seed: int, iterations: int = 60) -> float:
    estimate = op_norm_estimate(
        handle,
        iterations=iterations,
        seed=seed,
        rtol=RESIDUAL_RTOL,
        atol=RESIDUAL_ATOL,
    )
    return estimate.value


def _default_params(a: AlgebraElement, p: Optional[DiracParams]) -> DiracParams:
    if p is None:
        return DiracParams(angle=a.angle)
    if p.angle != a.angle:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.THETA_MISMATCH,
                error_message="Dirac parameters and element use different angles.",
                context={"params": p.angle.theta, "element": a.theta},
            )
        )
    return p


def check_first_order(
    a: AlgebraElement,
    b: AlgebraElement,
    window: GnsWindow,
    p: Optional[DiracParams] = None,
    tolerance: float = DEFAULT_AXIOM_TOLERANCE,
    seed: int = 0,
) -> AxiomReport:
    """First-order condition [[D, pi(a)], J pi(b)* J^{-1}] = 0 on the guarded interior.

    Raises:
        NcgException: GUARD_TOO_SMALL when supp(a) + supp(b) exceeds the guard.
    """
    p = _default_params(a, p)
    window.require_guard(a.support_radius + b.support_radius, "check_first_order")
    commutator = commutator_with_dirac(p, a, window)
    right = opposite_action(b, window)
    residual = _residual_norm(commutator @ right - right @ commutator, seed)
    return AxiomReport(
        axiom="first-order",
        residual=residual,
        tolerance=tolerance,
        window=window.radius,
        guard=window.guard,
    )


def check_real_structure(
    a: AlgebraElement,
    b: AlgebraElement,
    window: GnsWindow,
    tolerance: float = DEFAULT_AXIOM_TOLERANCE,
    seed: int = 0,
) -> AxiomReport:
    """Commutant condition [pi(a), J pi(b)* J^{-1}] = 0 on the guarded interior.

    Raises:
        NcgException: GUARD_TOO_SMALL when supp(a) + supp(b) exceeds the guard.
    """
    window.require_guard(a.support_radius + b.support_radius, "check_real_structure")
    left = represent(a, window)
    right = opposite_action(b, window)
    residual = _residual_norm(left @ right - right @ left, seed)
    return AxiomReport(
        axiom="real-structure",
        residual=residual,
        tolerance=tolerance,
        window=window.radius,
        guard=window.guard,
    )


def check_sign_table(
    p: DiracParams,
    window: GnsWindow,
    tolerance: float = DEFAULT_AXIOM_TOLERANCE,
    seed: int = 0,
) -> list[AxiomReport]:
    """Signs of the dimension 2 (mod 8) real structure: J^2 = -1, JD = DJ, J Gamma = -Gamma J.

    Antilinear residuals are measured through J (an isometry), which makes them linear.
    """
    j = real_structure(window, p.angle)
    d = dirac_operator(p, window)
    gamma = grading_operator(window)
    identity = j @ j.scale(-1.0)
    checks = [
        ("J^2 = -1", j @ j + identity),
        ("JD = DJ", j @ (j @ d - d @ j)),
        ("J Gamma = -Gamma J", j @ (j @ gamma + gamma @ j)),
    ]
    reports = []
    for offset, (name, handle) in enumerate(checks):
        residual = _residual_norm(handle, seed + offset)
        reports.append(
            AxiomReport(
                axiom=name,
                residual=residual,
                tolerance=tolerance,
                window=window.radius,
                guard=window.guard,
            )
        )
    return reports


def check_self_adjointness(
    p: DiracParams,
    window: GnsWindow,
    tolerance: float = DEFAULT_AXIOM_TOLERANCE,
    seed: int = 0,
) -> list[AxiomReport]:
    """Symmetry of Gamma and of D, via (Tx, y) - (x, Ty) on seeded interior vectors."""
    from nctorus.utils import ElementGenerator

    gen = ElementGenerator(seed)
    mask = window.mask()
    reports = []
    for name, handle in (
        ("Gamma selfadjoint", grading_operator(window)),
        ("D symmetric", dirac_operator(p, window)),
    ):
        residual = 0.0
        for _ in range(4):
            x = gen.coefficients((2, window.dimension)) * mask
            y = gen.coefficients((2, window.dimension)) * mask
            lhs = np.vdot(handle.apply(x), y)
            rhs = np.vdot(x, handle.apply(y))
            scale = np.linalg.norm(handle.apply(x)) * np.linalg.norm(y) + 1.0
            residual = max(residual, abs(lhs - rhs) / scale)
        reports.append(
            AxiomReport(
                axiom=name,
                residual=residual,
                tolerance=tolerance,
                window=window.radius,
                guard=window.guard,
            )
        )
    return reports


def _lower_triangular(
    diagonal: LinearMapHandle, lower: LinearMapHandle, label: str
) -> LinearMapHandle:
    half = diagonal.blocks

    def forward(x: np.ndarray) -> np.ndarray:
        top, bottom = x[:half], x[half:]
        return np.concatenate(
            [diagonal.forward(top), lower.forward(top) + diagonal.forward(bottom)]
        )

    def backward(y: np.ndarray) -> np.ndarray:
        top, bottom = y[:half], y[half:]
        return np.concatenate(
            [diagonal.backward(top) + lower.backward(bottom), diagonal.backward(bottom)]
        )

    return LinearMapHandle(
        label=label,
        window=diagonal.window,
        blocks=2 * half,
        forward=forward,
        backward=backward,
    )


def pi_s_representation(
    a: AlgebraElement,
    s: int,
    window: GnsWindow,
    p: Optional[DiracParams] = None,
    cap: int = DEFAULT_PI_S_CAP,
) -> LinearMapHandle:
    """Representation pi^s(a) on the 2^s-fold sum of spinor spaces.

    pi^0 = pi and pi^{s+1}(a) = [[pi^s(a), 0], [[D, pi^s(a)], pi^s(a)]], where D acts
    diagonally on every spinor pair.

    Raises:
        NcgException: CAP_EXCEEDED when s exceeds the cap, GUARD_TOO_SMALL when
            supp(a) * s exceeds the guard.
    """
    if s < 1 or s > cap:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CAP_EXCEEDED,
                error_message=f"Order s must lie in [1, {cap}].",
                context={"s": s, "cap": cap},
            )
        )
    p = _default_params(a, p)
    window.require_guard(a.support_radius * s, "pi_s_representation")
    current = represent(a, window)
    for order in range(1, s + 1):
        d = dirac_operator(p, window, current.blocks)
        current = _lower_triangular(current, d @ current - current @ d, f"pi^{order}(a)")
    return current


def seminorm(
    a: AlgebraElement,
    s: int,
    window: GnsWindow,
    p: Optional[DiracParams] = None,
    growth_factor: float = 1.5,
    iterations: int = 400,
    seed: int = 0,
) -> SeminormEstimate:
    """Estimate ||a||_s = ||pi^s(a)|| at the given window and an enlarged one.

    pi^{s-1}(a) is a diagonal block of pi^s(a), so the running maximum over
    orders 1..s is still a lower bound and is nondecreasing in s.
    """
    values = []
    converged = True
    for target in (window, window.enlarged(growth_factor)):
        best = 0.0
        for order in range(1, s + 1):
            handle = pi_s_representation(a, order, target, p)
            estimate = op_norm_estimate(handle, iterations=iterations, seed=seed)
            converged = converged and estimate.converged
            best = max(best, estimate.value)
        values.append(best)
    result = SeminormEstimate(
        order=s,
        value=values[0],
        enlarged_value=values[1],
        window=window.radius,
        enlarged_window=window.enlarged(growth_factor).radius,
        converged=converged,
    )
    if not result.is_window_stable():
        logger.warning(
            "Seminorm of order %d grew by %.3e between windows %d and %d",
            s,
            result.growth,
            result.window,
            result.enlarged_window,
        )
    return result
