"""Power-law solution families of the Black-Scholes PDE.

Two ansatzes reduce the PDE to an equidimensional (Euler) ODE in the spot:

* ``C(s, t) = C(s) exp(lambda t)`` gives ``C(s) = c1 s^k1 + c2 s^k2`` where k
  solves ``sigma^2/2 k(k-1) + r k + (lambda - r) = 0``;
* ``C(s, t) = S(s) T(t)`` with separation constant ``c`` gives
  ``S(s) = A1 s^d1 + A2 s^d2`` and ``T(t) = exp((r - c) t)``, where d solves
  ``d^2 + (r/a - 1) d - c/a = 0`` with ``a = sigma^2/2``.

Both are the same quadratic once ``lambda = r - c``. Coefficients are free;
no boundary data is fitted here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DomainError, MarketParams, RegimeError

__all__ = [
    "EulerSolution",
    "SeparableSolution",
    "quadratic_roots",
    "euler_roots",
    "euler_eval",
    "euler_residual",
    "separable_roots",
    "separable_eval",
    "separable_residual",
]


def quadratic_roots(a: float, b: float, c: float) -> tuple[float, float]:
    """Distinct real roots of ``a z^2 + b z + c``, larger first.

    Uses the cancellation-free form ``q = -(b + sign(b) sqrt(D)) / 2``.
    """
    disc = b * b - 4.0 * a * c
    if not disc > 0.0:
        raise RegimeError(f"discriminant {disc:.6g} is not positive; roots are not distinct and real")
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    z1 = q / a
    z2 = c / q if q != 0.0 else -z1
    return (z1, z2) if z1 > z2 else (z2, z1)


def euler_coefficients(lam: float, params: MarketParams) -> tuple[float, float, float]:
    half_var = 0.5 * params.sigma**2
    return half_var, params.r - half_var, lam - params.r


def euler_roots(lam: float, params: MarketParams) -> tuple[float, float]:
    """Exponents k1 > k2 for the ``C(s) exp(lambda t)`` ansatz."""
    return quadratic_roots(*euler_coefficients(lam, params))


def _power_terms(s: float, coeffs, exponents) -> list[float]:
    if not s > 0:
        raise DomainError(f"spot must be positive, got {s}")
    log_s = math.log(s)
    return [c * math.exp(k * log_s) if c else 0.0 for c, k in zip(coeffs, exponents)]


@dataclass(frozen=True)
class EulerSolution:
    """``(c1 s^k1 + c2 s^k2) exp(lambda t)``.

    In Euler-equation form ``s^2 C'' + alpha s C' + beta C = 0`` the
    coefficients are ``alpha = 2r/sigma^2`` and ``beta = 2(lambda - r)/sigma^2``.
    """

    lam: float
    k1: float
    k2: float
    c1: float
    c2: float
    params: MarketParams

    def __post_init__(self):
        if self.k1 == self.k2:
            raise RegimeError("EulerSolution needs distinct exponents")

    @classmethod
    def build(cls, lam: float, params: MarketParams, c1: float = 1.0, c2: float = 1.0):
        k1, k2 = euler_roots(lam, params)
        return cls(lam, k1, k2, c1, c2, params)

    @property
    def alpha(self) -> float:
        return 2.0 * self.params.r / self.params.sigma**2

    @property
    def beta(self) -> float:
        return 2.0 * (self.lam - self.params.r) / self.params.sigma**2


def euler_eval(sol: EulerSolution, s: float, t: float) -> float:
    terms = _power_terms(s, (sol.c1, sol.c2), (sol.k1, sol.k2))
    return sum(terms) * math.exp(sol.lam * t)


def euler_residual(sol: EulerSolution, s: float, t: float) -> float:
    """``C_t + sigma^2/2 s^2 C_ss + r s C_s - r C`` evaluated exactly.

    On ``s^k exp(lambda t)`` the operator reduces to multiplication by
    ``lambda + sigma^2/2 k(k-1) + r k - r``.
    """
    a, b, c = euler_coefficients(sol.lam, sol.params)
    growth = math.exp(sol.lam * t)
    terms = _power_terms(s, (sol.c1, sol.c2), (sol.k1, sol.k2))
    return growth * sum(
        term * ((a * k + b) * k + c) for term, k in zip(terms, (sol.k1, sol.k2))
    )


@dataclass(frozen=True)
class SeparableSolution:
    """``(A1 s^d1 + A2 s^d2) exp((b - c) t)`` with ``a = sigma^2/2`` and ``b = r``."""

    c: float
    d1: float
    d2: float
    a: float
    b: float
    coeffs: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.d1 == self.d2:
            raise RegimeError("SeparableSolution needs distinct exponents")
        if not self.a > 0:
            raise DomainError("a = sigma^2/2 must be positive")

    @classmethod
    def build(cls, c: float, params: MarketParams, coeffs=(1.0, 1.0)):
        d1, d2 = separable_roots(c, params)
        return cls(c, d1, d2, 0.5 * params.sigma**2, params.r, tuple(coeffs))

    def time_factor(self, t: float) -> float:
        return math.exp((self.b - self.c) * t)


def separable_roots(c: float, params: MarketParams) -> tuple[float, float]:
    """Exponents d1 > d2 of the spatial factor for separation constant ``c``."""
    a = 0.5 * params.sigma**2
    b = params.r
    return quadratic_roots(1.0, b / a - 1.0, -c / a)


def separable_eval(sol: SeparableSolution, s: float, t: float) -> float:
    return sum(_power_terms(s, sol.coeffs, (sol.d1, sol.d2))) * sol.time_factor(t)


def separable_residual(sol: SeparableSolution, s: float, t: float) -> float:
    """Full Black-Scholes operator (including ``-rC``) on the product form.

    Per power term the operator is ``(b - c) + a d(d-1) + b d - b``
    times the term, i.e. ``a d^2 + (b - a) d - c``.
    """
    a, b, c = sol.a, sol.b, sol.c
    terms = _power_terms(s, sol.coeffs, (sol.d1, sol.d2))
    return sol.time_factor(t) * sum(
        term * ((a * d + (b - a)) * d - c) for term, d in zip(terms, (sol.d1, sol.d2))
    )
