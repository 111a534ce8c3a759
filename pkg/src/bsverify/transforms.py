"""Change of variables V -> omega -> nu reducing Black-Scholes to the heat equation.

The heat-kernel pricer here is deliberately independent of the closed form:
it integrates the payoff against the Gaussian kernel numerically instead of
using the normal CDF, so the two routes can check each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .core import (
    DomainError,
    MarketParams,
    OptionKind,
    OptionSpec,
    QuadratureError,
    Quote,
)

__all__ = [
    "TransformContext",
    "DimensionlessPoint",
    "QuadratureConfig",
    "InitialCondition",
    "to_dimensionless",
    "from_dimensionless",
    "initial_condition",
    "payoff_initial_condition",
    "nu_to_omega",
    "heat_solution",
    "price_via_heat_kernel",
]


@dataclass(frozen=True)
class TransformContext:
    strike: float
    expiry: float
    params: MarketParams
    k: float = field(init=False)

    def __post_init__(self):
        if not self.strike > 0:
            raise DomainError(f"strike must be positive, got {self.strike}")
        object.__setattr__(self, "k", self.params.k)

    @classmethod
    def from_spec(cls, spec: OptionSpec, params: MarketParams) -> "TransformContext":
        return cls(spec.strike, spec.expiry, params)


@dataclass(frozen=True)
class DimensionlessPoint:
    x: float
    tau: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.tau)):
            raise DomainError("dimensionless coordinates must be finite")
        if self.tau < 0:
            raise DomainError(f"tau must be non-negative, got {self.tau}")


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for the adaptive Gauss-Legendre kernel integration.

    ``width`` is the truncation half-width in units of sqrt(4 tau) around
    each peak of the integrand; the Gaussian tail beyond it is below
    exp(-width**2) of the peak mass.
    """

    rtol: float = 1e-9
    atol: float = 0.0
    width: float = 8.0
    order: int = 24
    initial_panels: int = 8
    max_panels: int = 4096

    def __post_init__(self):
        if self.rtol <= 0 or self.atol < 0:
            raise DomainError("rtol must be positive and atol non-negative")
        if self.width <= 0:
            raise DomainError("truncation width must be positive")
        if self.order < 2 or self.initial_panels < 1 or self.max_panels < self.initial_panels:
            raise DomainError("invalid node budget")


@dataclass(frozen=True)
class InitialCondition:
    """Heat-equation initial data together with hints for the integrator.

    ``support`` bounds where ``func`` can be nonzero; ``growth`` lists the
    exponential rates ``a`` of the terms ``exp(a*y)`` making up ``func``, which
    shift the integrand's peaks to ``x + 2*a*tau``.
    """

    func: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float] = (-math.inf, math.inf)
    growth: tuple[float, ...] = (0.0,)

    def __call__(self, y):
        return self.func(y)


def to_dimensionless(ctx: TransformContext, quote: Quote) -> DimensionlessPoint:
    if quote.spot <= 0:
        raise DomainError("spot 0 maps to x = -inf")
    if quote.time > ctx.expiry:
        raise DomainError(f"quote time {quote.time} is after expiry {ctx.expiry}")
    sigma = ctx.params.sigma
    return DimensionlessPoint(
        math.log(quote.spot / ctx.strike), 0.5 * sigma**2 * (ctx.expiry - quote.time)
    )


def from_dimensionless(ctx: TransformContext, pt: DimensionlessPoint) -> Quote:
    return Quote(
        ctx.strike * math.exp(pt.x), ctx.expiry - 2.0 * pt.tau / ctx.params.sigma**2
    )


def initial_condition(ctx: TransformContext, kind, x):
    """Payoff expressed in heat-equation variables, nu(x, 0)."""
    kind = OptionKind.parse(kind)
    k = ctx.k
    x_arr = np.asarray(x, dtype=float)
    up = np.exp(0.5 * (k + 1.0) * x_arr)
    down = np.exp(0.5 * (k - 1.0) * x_arr)
    if kind is OptionKind.CALL:
        out = np.where(x_arr > 0, up - down, 0.0)
    else:
        out = np.where(x_arr < 0, down - up, 0.0)
    return float(out) if out.ndim == 0 else out


def payoff_initial_condition(ctx: TransformContext, kind) -> InitialCondition:
    kind = OptionKind.parse(kind)
    k = ctx.k
    growth = (0.5 * (k + 1.0), 0.5 * (k - 1.0))
    support = (0.0, math.inf) if kind is OptionKind.CALL else (-math.inf, 0.0)
    return InitialCondition(lambda y: initial_condition(ctx, kind, y), support, growth)


def nu_to_omega(ctx: TransformContext, pt: DimensionlessPoint, nu: float) -> float:
    k = ctx.k
    return math.exp(-0.5 * (k - 1.0) * pt.x - 0.25 * (k + 1.0) ** 2 * pt.tau) * nu


@lru_cache(maxsize=16)
def _gauss_legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


def _merge(intervals: list[tuple[float, float]]) -> list[tuple[float, float]]:
    merged: list[list[float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def _integration_windows(
    x: float, tau: float, support: tuple[float, float], growth: Sequence[float], width: float
) -> list[tuple[float, float]]:
    half = width * math.sqrt(4.0 * tau)
    pieces = []
    for a in growth:
        centre = x + 2.0 * a * tau
        lo, hi = max(centre - half, support[0]), min(centre + half, support[1])
        if lo < hi:
            pieces.append((lo, hi))
    return _merge(pieces)


def _adaptive_gauss_legendre(f, windows, cfg: QuadratureConfig) -> float:
    nodes, weights = _gauss_legendre(cfg.order)

    def panel(a: float, b: float) -> tuple[float, float]:
        half = 0.5 * (b - a)
        vals = f(0.5 * (a + b) + half * nodes)
        return half * float(weights @ vals), half * float(weights @ np.abs(vals))

    total_len = sum(hi - lo for lo, hi in windows)
    if total_len == 0.0:
        return 0.0
    stack = []
    scale = 0.0
    for lo, hi in windows:
        edges = np.linspace(lo, hi, cfg.initial_panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            val, mag = panel(a, b)
            scale += mag
            stack.append((a, b, val))
    tol = max(cfg.rtol * scale, cfg.atol)

    result = 0.0
    err_sum = 0.0
    panels = len(stack)
    while stack:
        a, b, val = stack.pop()
        mid = 0.5 * (a + b)
        left, _ = panel(a, mid)
        right, _ = panel(mid, b)
        err = abs(left + right - val)
        if err <= tol * (b - a) / total_len or err == 0.0:
            result += left + right
            err_sum += err
            continue
        panels += 1
        if panels > cfg.max_panels:
            raise QuadratureError(
                "heat-kernel quadrature exceeded its panel budget",
                (err_sum + err) / scale if scale else math.inf,
            )
        stack.append((a, mid, left))
        stack.append((mid, b, right))
    return result


def heat_solution(
    g: InitialCondition | Callable[[np.ndarray], np.ndarray],
    pt: DimensionlessPoint,
    quad: QuadratureConfig | None = None,
) -> float:
    """Solve nu_tau = nu_xx at ``pt`` by convolving ``g`` with the heat kernel.

    ``nu(x, tau) = (4 pi tau)^{-1/2} * int g(y) exp(-(x - y)^2 / (4 tau)) dy``
    over the whole real line, truncated around the peaks of the integrand.
    A bare callable is treated as bounded with support on the whole line.
    """
    if pt.tau <= 0:
        raise DomainError("heat_solution needs tau > 0")
    quad = quad or QuadratureConfig()
    if not isinstance(g, InitialCondition):
        g = InitialCondition(g)
    x, tau = pt.x, pt.tau
    norm = 1.0 / math.sqrt(4.0 * math.pi * tau)

    def integrand(y):
        return g(y) * np.exp(-((x - y) ** 2) / (4.0 * tau))

    windows = _integration_windows(x, tau, g.support, g.growth, quad.width)
    return float(norm * _adaptive_gauss_legendre(integrand, windows, quad))


def price_via_heat_kernel(
    quote: Quote,
    spec: OptionSpec,
    params: MarketParams,
    quad: QuadratureConfig | None = None,
) -> float:
    """Option value obtained by solving the heat problem and transforming back."""
    tau_t = spec.tenor(quote)
    if quote.spot <= 0 or tau_t <= 0:
        raise DomainError("heat-kernel pricing needs spot > 0 and t < T")
    ctx = TransformContext.from_spec(spec, params)
    pt = to_dimensionless(ctx, quote)
    nu = heat_solution(payoff_initial_condition(ctx, spec.kind), pt, quad)
    return float(spec.strike * nu_to_omega(ctx, pt, nu))
