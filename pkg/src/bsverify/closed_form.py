"""Analytic European call/put prices, d+/d-, delta and put-call parity."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DomainError,
    MarketParams,
    OptionKind,
    OptionSpec,
    Quote,
    payoff,
    std_normal_cdf,
)

__all__ = [
    "PriceResult",
    "d_pm",
    "price",
    "delta",
    "parity_gap",
    "value_array",
    "delta_array",
]


@dataclass(frozen=True)
class PriceResult:
    """Option value with its d+/d- arguments and delta.

    At the limit points (t = T or S = 0) d+/d- are reported as +/-inf where
    the limit exists and nan where it does not (S = E at expiry).
    """

    value: float
    d_plus: float
    d_minus: float
    delta: float


def _d_pm(spot: float, strike: float, tau: float, params: MarketParams):
    vol_sqrt = params.sigma * math.sqrt(tau)
    log_m = math.log(spot / strike)
    d_plus = (log_m + (params.r + 0.5 * params.sigma**2) * tau) / vol_sqrt
    return d_plus, d_plus - vol_sqrt


def d_pm(quote: Quote, spec: OptionSpec, params: MarketParams) -> tuple[float, float]:
    """Return ``(d_plus, d_minus)``.

    Raises DomainError at S = 0 or t = T, where both are singular.
    """
    tau = spec.tenor(quote)
    if quote.spot == 0.0:
        raise DomainError("d+/d- are undefined at spot 0; use the boundary value")
    if tau == 0.0:
        raise DomainError("d+/d- are undefined at expiry; use the payoff")
    return _d_pm(quote.spot, spec.strike, tau, params)


def _limit_result(spec: OptionSpec, spot: float, tau: float, params: MarketParams):
    call = spec.kind is OptionKind.CALL
    if spot == 0.0:
        value = 0.0 if call else spec.strike * math.exp(-params.r * tau)
        return PriceResult(value, -math.inf, -math.inf, 0.0 if call else -1.0)
    # tau == 0: terminal payoff
    value = payoff(spec.kind, spot, spec.strike)
    if spot > spec.strike:
        d, itm_call = math.inf, 1.0
    elif spot < spec.strike:
        d, itm_call = -math.inf, 0.0
    else:
        d, itm_call = math.nan, 0.5
    return PriceResult(value, d, d, itm_call if call else itm_call - 1.0)


def price(quote: Quote, spec: OptionSpec, params: MarketParams) -> PriceResult:
    """Closed-form Black-Scholes value.

    The put uses ``E e^{-r(T-t)} N(-d-) - S N(-d+)``, the form consistent with
    put-call parity.
    """
    tau = spec.tenor(quote)
    spot = quote.spot
    if spot == 0.0 or tau == 0.0:
        return _limit_result(spec, spot, tau, params)
    d_plus, d_minus = _d_pm(spot, spec.strike, tau, params)
    discounted = spec.strike * math.exp(-params.r * tau)
    if spec.kind is OptionKind.CALL:
        value = spot * std_normal_cdf(d_plus) - discounted * std_normal_cdf(d_minus)
        dlt = std_normal_cdf(d_plus)
    else:
        value = discounted * std_normal_cdf(-d_minus) - spot * std_normal_cdf(-d_plus)
        dlt = std_normal_cdf(d_plus) - 1.0
    # cancellation can leave a sub-ulp negative residue in the far tails
    return PriceResult(max(value, 0.0), d_plus, d_minus, dlt)


def delta(quote: Quote, spec: OptionSpec, params: MarketParams) -> float:
    d_plus, _ = d_pm(quote, spec, params)
    n = std_normal_cdf(d_plus)
    return n if spec.kind is OptionKind.CALL else n - 1.0


def parity_gap(quote: Quote, strike: float, expiry: float, params: MarketParams) -> float:
    """``S + P - C - E e^{-r(T-t)}``; zero up to rounding."""
    call = price(quote, OptionSpec(OptionKind.CALL, strike, expiry), params).value
    put = price(quote, OptionSpec(OptionKind.PUT, strike, expiry), params).value
    tau = expiry - quote.time
    return quote.spot + put - call - strike * math.exp(-params.r * tau)


def value_array(kind, spot, tenor, strike: float, params: MarketParams) -> np.ndarray:
    """Vectorised closed-form value over broadcastable ``spot`` and ``tenor`` arrays.

    Handles S = 0 and T - t = 0 with the same limit formulas as :func:`price`.
    """
    kind = OptionKind.parse(kind)
    spot, tenor = np.broadcast_arrays(
        np.asarray(spot, dtype=float), np.asarray(tenor, dtype=float)
    )
    if np.any(spot < 0) or np.any(tenor < 0):
        raise DomainError("spot and tenor must be non-negative")
    out = np.empty(spot.shape)
    live = (spot > 0) & (tenor > 0)
    s, tau = spot[live], tenor[live]
    vol_sqrt = params.sigma * np.sqrt(tau)
    d_plus = (np.log(s / strike) + (params.r + 0.5 * params.sigma**2) * tau) / vol_sqrt
    d_minus = d_plus - vol_sqrt
    discounted = strike * np.exp(-params.r * tau)
    if kind is OptionKind.CALL:
        v = s * std_normal_cdf(d_plus) - discounted * std_normal_cdf(d_minus)
    else:
        v = discounted * std_normal_cdf(-d_minus) - s * std_normal_cdf(-d_plus)
    out[live] = np.maximum(v, 0.0)

    expired = tenor == 0
    out[expired] = payoff(kind, spot[expired], strike)
    at_zero = (spot == 0) & ~expired
    if kind is OptionKind.CALL:
        out[at_zero] = 0.0
    else:
        out[at_zero] = strike * np.exp(-params.r * tenor[at_zero])
    return out


def delta_array(kind, spot, tenor, strike: float, params: MarketParams) -> np.ndarray:
    """Vectorised delta for ``spot > 0`` and ``tenor > 0``."""
    kind = OptionKind.parse(kind)
    spot = np.asarray(spot, dtype=float)
    tenor = np.asarray(tenor, dtype=float)
    if np.any(spot <= 0) or np.any(tenor <= 0):
        raise DomainError("delta needs spot > 0 and tenor > 0")
    vol_sqrt = params.sigma * np.sqrt(tenor)
    d_plus = (np.log(spot / strike) + (params.r + 0.5 * params.sigma**2) * tenor) / vol_sqrt
    n = std_normal_cdf(np.asarray(d_plus))
    return n if kind is OptionKind.CALL else n - 1.0
