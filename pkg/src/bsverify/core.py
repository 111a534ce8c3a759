"""Shared numeric foundations: parameter types, error classes and the normal CDF."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc as _erfc_array

__all__ = [
    "BSError",
    "DomainError",
    "RegimeError",
    "PreconditionError",
    "NumericalError",
    "QuadratureError",
    "OptionKind",
    "MarketParams",
    "OptionSpec",
    "Quote",
    "std_normal_cdf",
    "payoff",
]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class BSError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BSError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class RegimeError(BSError, ValueError):
    """A characteristic equation has repeated or complex roots."""


class PreconditionError(BSError, ValueError):
    """Inputs are individually valid but violate a cross-argument requirement."""


class NumericalError(BSError, ArithmeticError):
    """A numerical scheme broke down (zero pivot, lost dominance, ...)."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


class OptionKind(str, enum.Enum):
    CALL = "call"
    PUT = "put"

    @classmethod
    def parse(cls, value: "str | OptionKind") -> "OptionKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown option kind {value!r}") from None


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class MarketParams:
    """Riskless rate ``r`` (continuously compounded, per year) and volatility ``sigma``."""

    r: float
    sigma: float

    def __post_init__(self):
        r = _finite("r", self.r)
        sigma = _finite("sigma", self.sigma)
        if r <= 0:
            raise DomainError(f"interest rate must be positive, got {r}")
        if sigma <= 0:
            raise DomainError(f"volatility must be positive, got {sigma}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "sigma", sigma)

    @property
    def k(self) -> float:
        """Dimensionless ratio 2r/sigma^2."""
        return 2.0 * self.r / self.sigma**2


@dataclass(frozen=True)
class OptionSpec:
    kind: OptionKind
    strike: float
    expiry: float

    def __post_init__(self):
        object.__setattr__(self, "kind", OptionKind.parse(self.kind))
        strike = _finite("strike", self.strike)
        expiry = _finite("expiry", self.expiry)
        if strike <= 0:
            raise DomainError(f"strike must be positive, got {strike}")
        if expiry < 0:
            raise DomainError(f"expiry must be non-negative, got {expiry}")
        object.__setattr__(self, "strike", strike)
        object.__setattr__(self, "expiry", expiry)

    def tenor(self, quote: "Quote") -> float:
        """Time to expiry T - t, validating that the quote is not past expiry."""
        if quote.time > self.expiry:
            raise DomainError(
                f"quote time {quote.time} is after expiry {self.expiry}"
            )
        return self.expiry - quote.time


@dataclass(frozen=True)
class Quote:
    spot: float
    time: float = 0.0

    def __post_init__(self):
        spot = _finite("spot", self.spot)
        if spot < 0:
            raise DomainError(f"spot must be non-negative, got {spot}")
        object.__setattr__(self, "spot", spot)
        object.__setattr__(self, "time", _finite("time", self.time))


def std_normal_cdf(z):
    """Standard normal CDF via the complementary error function.

    Accepts a float or an array. ``N(z) = erfc(-z / sqrt(2)) / 2``; using erfc
    rather than ``1 + erf`` keeps full relative accuracy in the lower tail.
    """
    if isinstance(z, np.ndarray):
        if not np.all(np.isfinite(z)):
            raise DomainError("std_normal_cdf requires finite input")
        return 0.5 * _erfc_array(-z * _INV_SQRT2)
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"std_normal_cdf requires finite input, got {z}")
    return 0.5 * math.erfc(-z * _INV_SQRT2)


def payoff(kind: OptionKind | str, spot, strike: float):
    """Terminal payoff (S-E)+ or (E-S)+; works on floats and arrays."""
    kind = OptionKind.parse(kind)
    diff = spot - strike if kind is OptionKind.CALL else strike - spot
    if isinstance(diff, np.ndarray):
        return np.maximum(diff, 0.0)
    return max(diff, 0.0)
