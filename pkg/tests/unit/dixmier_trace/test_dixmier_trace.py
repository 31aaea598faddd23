"""Unit tests for the singular value functionals and the noncommutative integral.

This module tests sigma_n and its interpolation sigma_lambda, the Cesaro mean
tau_lambda, the extrapolated integral, the L^{1,+} norm and the stream algebra.
"""

import io
import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from nctorus.dixmier_trace import (
    SingularValueStream,
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
from nctorus.errors import NcgException
from tests.strategies import positive_diagonal_pairs, singular_values

SLACK = 1e-9


@pytest.fixture
def diag321():
    """Singular values of diag(3, 2, 1)."""
    return SingularValueStream(values=[3.0, 2.0, 1.0])


@pytest.fixture(scope="module")
def harmonic():
    """The truncated harmonic stream 1, 1/2, 1/3, ... up to 10^5."""
    return SingularValueStream(
        values=1.0 / np.arange(1, 100_001), provenance="harmonic", finite_rank=False
    )


@pytest.fixture
def trace_class():
    """The stream 2^-i, i = 1..60."""
    return SingularValueStream(values=2.0 ** -np.arange(1, 61), provenance="geometric")


def test_sigma_n_examples(diag321):
    """Test partial sums, the norm and the zero operator."""
    assert sigma_n(diag321, 2) == 5.0
    assert sigma_n(diag321, 1) == diag321.norm == 3.0
    assert sigma_n(diag321, 10) == 6.0
    assert sigma_n(SingularValueStream(values=[]), 4) == 0.0


def test_sigma_n_requires_positive_n(diag321):
    """Test that n must be at least 1."""
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        sigma_n(diag321, 0)


def test_sigma_lambda_examples(diag321):
    """Test the interpolation at 2.5 and the rule lambda ||T|| on (0, 1]."""
    assert sigma_lambda(diag321, 2.5) == pytest.approx(5.5, abs=1e-15)
    assert sigma_lambda(diag321, 0.5) == pytest.approx(1.5, abs=1e-15)


def test_sigma_lambda_is_exact_on_breakpoints(diag321):
    """Test sigma_lambda = sigma_n at integer lambda."""
    for n in (1, 2, 3, 4):
        assert sigma_lambda(diag321, float(n)) == sigma_n(diag321, n)


def test_sigma_lambda_rejects_nonpositive_lambda(diag321):
    """Test that lambda must be positive."""
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        sigma_lambda(diag321, 0.0)


def test_truncated_stream_is_too_short(harmonic):
    """Test that functionals never read past a truncated stream."""
    with pytest.raises(NcgException, match="STREAM_TOO_SHORT"):
        sigma_n(harmonic, 100_001)
    with pytest.raises(NcgException, match="STREAM_TOO_SHORT"):
        sigma_lambda(harmonic, 100_000.5)
    with pytest.raises(NcgException, match="STREAM_TOO_SHORT"):
        ncint_estimate(harmonic, 1e6)


@settings(max_examples=200, deadline=None)
@given(
    singular_values(),
    st.floats(min_value=0.01, max_value=250.0),
    st.floats(min_value=0.01, max_value=250.0),
)
def test_sigma_lambda_is_increasing_and_concave(values, lam1, lam2):
    """Test monotonicity and midpoint concavity of lambda -> sigma_lambda."""
    sv = SingularValueStream(values=values)
    lo, hi = sorted((lam1, lam2))
    s_lo, s_hi, s_mid = sigma_curve(sv, [lo, hi, 0.5 * (lo + hi)])
    assert s_lo <= s_hi + SLACK
    assert s_mid >= 0.5 * (s_lo + s_hi) - SLACK * (1.0 + s_hi)


@settings(max_examples=1000, deadline=None)
@given(positive_diagonal_pairs(), st.floats(min_value=0.01, max_value=50.0))
def test_sandwich_on_commuting_positive_diagonals(pair, lam):
    """Test sigma_lambda(A + B) <= sigma_lambda(A) + sigma_lambda(B) <= sigma_2lambda(A + B)."""
    x, y = pair
    a = SingularValueStream.from_diagonal(x)
    b = SingularValueStream.from_diagonal(y)
    total = SingularValueStream.from_diagonal(x + y)
    middle = sigma_lambda(a, lam) + sigma_lambda(b, lam)
    slack = SLACK * (1.0 + middle)
    assert sigma_lambda(total, lam) <= middle + slack
    assert middle <= sigma_lambda(total, 2 * lam) + slack


@settings(max_examples=300, deadline=None)
@given(positive_diagonal_pairs(), st.floats(min_value=0.01, max_value=50.0))
def test_sandwich_on_direct_sums(pair, lam):
    """Test the sandwich for A (+) B, whose singular values are the merged stream."""
    a = SingularValueStream.from_diagonal(pair[0])
    b = SingularValueStream.from_diagonal(pair[1])
    merged = direct_sum(a, b)
    middle = sigma_lambda(a, lam) + sigma_lambda(b, lam)
    slack = SLACK * (1.0 + middle)
    assert sigma_lambda(merged, lam) <= middle + slack
    assert middle <= sigma_lambda(merged, 2 * lam) + slack


@settings(max_examples=300, deadline=None)
@given(
    positive_diagonal_pairs(),
    st.integers(min_value=1, max_value=40),
    st.integers(min_value=1, max_value=40),
)
def test_reverse_triangle_inequality(pair, lam, mu):
    """Test sigma_lambda(A) + sigma_mu(B) <= sigma_{lambda + mu}(A + B) for positive A, B."""
    x, y = pair
    left = sigma_lambda(SingularValueStream.from_diagonal(x), lam) + sigma_lambda(
        SingularValueStream.from_diagonal(y), mu
    )
    right = sigma_lambda(SingularValueStream.from_diagonal(x + y), lam + mu)
    assert left <= right + SLACK * (1.0 + right)


def test_tau_lambda_of_zero_operator():
    """Test that tau_lambda(0) = 0."""
    estimate = tau_lambda(SingularValueStream(values=[]), 1e4)
    assert estimate.value == 0.0
    assert estimate.error == 0.0


def test_tau_lambda_is_positively_homogeneous(harmonic):
    """Test tau_lambda(c T) = c tau_lambda(T)."""
    base = tau_lambda(harmonic, 5e4)
    scaled = tau_lambda(scale(harmonic, 3.0), 5e4)
    assert scaled.value == pytest.approx(3.0 * base.value, rel=1e-12)
    assert base.error < 1e-4
    assert base.at == 5e4


def test_tau_lambda_of_trace_class_stream_decays(trace_class):
    """Test that tau_lambda of a trace-class operator tends to 0."""
    values = [tau_lambda(trace_class, lam).value for lam in (1e2, 1e4, 1e6)]
    assert values[0] > values[1] > values[2] > 0.0
    assert values[2] < 0.25


def test_tau_lambda_at_e_vanishes(diag321):
    """Test that the Cesaro mean starts at 0 and needs lambda >= e."""
    assert tau_lambda(diag321, math.e).value == 0.0
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        tau_lambda(diag321, 2.0)


@settings(max_examples=50, deadline=None)
@given(singular_values())
def test_tau_lambda_is_bounded_by_l1plus_norm(values):
    """Test tau_lambda(T) <= sup_{u <= lambda} sigma_u / log u."""
    sv = SingularValueStream(values=values)
    estimate = tau_lambda(sv, 150.0)
    assert estimate.value <= l1plus_norm(sv, 150.0) + estimate.error + SLACK


def test_l1plus_norm_of_harmonic_stream(harmonic):
    """Test that the supremum of sigma_lambda / log lambda sits at lambda = e."""
    assert l1plus_norm(harmonic, 1e4) == pytest.approx(sigma_lambda(harmonic, math.e))
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        l1plus_norm(harmonic, 2.0)


def test_harmonic_stream_integrates_to_one(harmonic):
    """Test that the noncommutative integral of diag(1/i) is 1 within 2%."""
    estimate = ncint_estimate(harmonic, 1e5)
    assert estimate.value == pytest.approx(1.0, rel=0.02)
    assert estimate.fit_residual < 1e-4
    assert estimate.lambda_min == pytest.approx(1e4, rel=5e-3)
    assert set(estimate.to_json_dict()) == {"value", "fit_b", "fit_residual", "lambda_max"}


def test_trace_class_stream_integrates_to_zero(trace_class):
    """Test that trace-class operators have vanishing integral."""
    assert ncint_estimate(trace_class, 1e6).value == pytest.approx(0.0, abs=1e-3)


def test_ncint_estimate_is_linear(harmonic):
    """Test that scaling the stream scales the estimate."""
    base = ncint_estimate(harmonic, 1e5)
    scaled = ncint_estimate(scale(harmonic, 2.5), 1e5)
    assert scaled.value == pytest.approx(2.5 * base.value, rel=1e-9)
    assert scaled.fit_residual == pytest.approx(2.5 * base.fit_residual, rel=1e-6, abs=1e-10)


def test_poor_fit_is_reported(caplog):
    """Test the warning for a stream outside L^{1,+}."""
    sv = SingularValueStream(values=np.arange(1, 10_001) ** -0.5, finite_rank=False)
    with caplog.at_level(logging.WARNING, logger="nctorus.dixmier_trace.dixmier_trace"):
        ncint_estimate(sv, 1e4)
    assert "Poor Dixmier fit" in caplog.text


def test_ncint_estimate_needs_a_decade_above_e(diag321):
    """Test that lambda_max must be at least 10 e."""
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        ncint_estimate(diag321, 20.0)


def test_direct_sum_of_truncated_streams(harmonic):
    """Test that the merge keeps only values no unseen entry can overtake."""
    head = harmonic.head(10)
    assert not head.finite_rank
    merged = direct_sum(head, SingularValueStream(values=[0.5, 0.05]))
    assert not merged.finite_rank
    assert merged.values[-1] == pytest.approx(0.1)
    assert 0.05 not in merged.values.tolist()
    assert len(merged) == 11


def test_scale_rejects_negative_factor(diag321):
    """Test that only nonnegative multiples are streams."""
    assert scale(diag321, 2.0).values.tolist() == [6.0, 4.0, 2.0]
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        scale(diag321, -1.0)


@pytest.mark.parametrize(
    "values,message",
    [
        ([1.0, 2.0], "nonincreasing"),
        ([1.0, -0.5], "nonnegative"),
        ([[1.0]], "1-D"),
        ([np.inf], "finite"),
    ],
)
def test_stream_validation(values, message):
    """Test that malformed streams are rejected."""
    with pytest.raises(ValidationError, match=message):
        SingularValueStream(values=values)


def test_from_diagonal_uses_moduli():
    """Test that singular values of a diagonal are the sorted moduli."""
    sv = SingularValueStream.from_diagonal([1.0, -3.0, 2j])
    assert sv.values.tolist() == [3.0, 2.0, 1.0]


def test_stream_csv_round_trip(harmonic, tmp_path):
    """Test the (index, value) interchange format."""
    head = harmonic.head(25)
    path = tmp_path / "streams" / "harmonic.csv"
    write_stream_csv(head, path)
    assert path.read_text().splitlines()[0] == "index,value"
    back = read_stream_csv(path, provenance="harmonic", finite_rank=False)
    assert np.array_equal(back.values, head.values)
    assert not back.finite_rank


def test_stream_csv_rejects_gaps():
    """Test that indices must be consecutive from 1."""
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        read_stream_csv(io.StringIO("index,value\n1,2.0\n3,1.0\n"))
