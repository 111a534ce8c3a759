"""Black-Scholes pricing cross-checked by closed form, heat kernel, finite differences and hedging."""
from .core import (
    BSError,
    DomainError,
    MarketParams,
    NumericalError,
    OptionKind,
    OptionSpec,
    PreconditionError,
    QuadratureError,
    Quote,
    RegimeError,
    payoff,
    std_normal_cdf,
)
from .closed_form import PriceResult, delta, parity_gap, price

__version__ = "0.1.0"

__all__ = [
    "BSError",
    "DomainError",
    "MarketParams",
    "NumericalError",
    "OptionKind",
    "OptionSpec",
    "PreconditionError",
    "PriceResult",
    "QuadratureError",
    "Quote",
    "RegimeError",
    "delta",
    "parity_gap",
    "payoff",
    "price",
    "std_normal_cdf",
]
