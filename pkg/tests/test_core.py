import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsverify import DomainError, MarketParams, OptionKind, OptionSpec, Quote, payoff, std_normal_cdf


def trapezoid_cdf(z: float, lo: float = -12.0, n: int = 400_001) -> float:
    # independent oracle: integrate the Gaussian density directly
    y = np.linspace(lo, z, n)
    f = np.exp(-0.5 * y * y) / math.sqrt(2 * math.pi)
    h = (z - lo) / (n - 1)
    trap = h * (f.sum() - 0.5 * (f[0] + f[-1]))
    # Euler-Maclaurin endpoint correction, f' = -y f
    return float(trap - h * h / 12.0 * (-z * f[-1] + lo * f[0]))


def test_cdf_at_zero():
    assert std_normal_cdf(0.0) == 0.5


def test_cdf_1_96_against_quadrature():
    oracle = trapezoid_cdf(1.96)
    assert oracle == pytest.approx(0.9750021048517795, abs=1e-14)
    assert std_normal_cdf(1.96) == pytest.approx(0.9750021048517795, abs=1e-15)


def test_cdf_one_and_minus_one_sum():
    assert std_normal_cdf(1.0) + std_normal_cdf(-1.0) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(-40, 40))
def test_cdf_symmetry(z):
    assert abs(std_normal_cdf(-z) - (1.0 - std_normal_cdf(z))) <= 1e-14


@given(st.floats(-40, 40), st.floats(-40, 40))
def test_cdf_monotone(a, b):
    lo, hi = sorted((a, b))
    assert std_normal_cdf(lo) <= std_normal_cdf(hi)


def test_cdf_tails():
    assert std_normal_cdf(-8.0) < 1e-15
    assert abs(std_normal_cdf(8.0) - 1.0) <= 1e-15


def test_cdf_array_matches_scalar():
    z = np.linspace(-6, 6, 41)
    got = std_normal_cdf(z)
    assert got == pytest.approx([std_normal_cdf(float(v)) for v in z], rel=1e-14)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_cdf_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        std_normal_cdf(bad)
    with pytest.raises(DomainError):
        std_normal_cdf(np.array([0.0, bad]))


@pytest.mark.parametrize("r, sigma", [(0.0, 0.2), (-0.1, 0.2), (0.05, 0.0), (0.05, -1.0), (math.nan, 0.2)])
def test_market_params_validation(r, sigma):
    with pytest.raises(DomainError):
        MarketParams(r, sigma)


def test_market_params_k():
    assert MarketParams(0.05, 0.2).k == pytest.approx(2.5)


def test_option_spec_validation():
    assert OptionSpec("PUT", 100, 1).kind is OptionKind.PUT
    with pytest.raises(DomainError):
        OptionSpec("straddle", 100, 1)
    with pytest.raises(DomainError):
        OptionSpec("call", 0.0, 1)
    with pytest.raises(DomainError):
        OptionSpec("call", 100, -1)
    with pytest.raises(DomainError):
        OptionSpec("call", 100, 1).tenor(Quote(100, 2.0))


def test_quote_rejects_negative_spot():
    with pytest.raises(DomainError):
        Quote(-1.0)


def test_payoff_scalar_and_array():
    assert payoff("call", 150.0, 100.0) == 50.0
    assert payoff("put", 150.0, 100.0) == 0.0
    assert np.array_equal(payoff("put", np.array([50.0, 100.0, 150.0]), 100.0), [50.0, 0.0, 0.0])
