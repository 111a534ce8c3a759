"""Finite-difference solution of the backward Black-Scholes PDE on a uniform S grid."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from . import closed_form
from .core import (
    DomainError,
    MarketParams,
    NumericalError,
    OptionKind,
    OptionSpec,
    PreconditionError,
    payoff,
)

__all__ = [
    "Scheme",
    "GridSpec",
    "ValueSurface",
    "TridiagonalLU",
    "solve_tridiagonal",
    "backward_march",
    "solve",
    "DominanceReport",
    "volatility_dominance",
]

MAX_NODES = 20_001
MAX_STEPS = 200_000
NEGATIVITY_TOL = 1e-10


class Scheme(str, enum.Enum):
    IMPLICIT = "implicit"
    CRANK_NICOLSON = "cn"

    @property
    def theta(self) -> float:
        return 1.0 if self is Scheme.IMPLICIT else 0.5


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid: ``ns`` spot nodes on ``[0, s_max]`` and ``nt`` time steps."""

    s_max: float
    ns: int
    nt: int
    scheme: Scheme = Scheme.CRANK_NICOLSON

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not (self.s_max > 0 and math.isfinite(self.s_max)):
            raise DomainError(f"s_max must be positive and finite, got {self.s_max}")
        if not 3 <= self.ns <= MAX_NODES:
            raise DomainError(f"ns must lie in [3, {MAX_NODES}], got {self.ns}")
        if not 1 <= self.nt <= MAX_STEPS:
            raise DomainError(f"nt must lie in [1, {MAX_STEPS}], got {self.nt}")

    @classmethod
    def for_option(cls, spec: OptionSpec, spot: float | None = None, ns: int = 401,
                   nt: int = 400, scheme: Scheme = Scheme.CRANK_NICOLSON) -> "GridSpec":
        """Truncate at ``max(4E, 4 S0)``."""
        s_max = 4.0 * max(spec.strike, spot or 0.0)
        return cls(s_max, ns, nt, scheme)

    @property
    def ds(self) -> float:
        return self.s_max / (self.ns - 1)

    @property
    def spots(self) -> np.ndarray:
        return np.linspace(0.0, self.s_max, self.ns)


@dataclass(frozen=True)
class ValueSurface:
    """Option values indexed ``values[time_level, spot_node]``.

    Time level ``j`` sits at ``t = j * T / nt``; the last row is the payoff.
    """

    values: np.ndarray
    grid: GridSpec
    spec: OptionSpec
    params: MarketParams
    times: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.nt + 1, self.grid.ns):
            raise DomainError(f"surface shape {values.shape} does not match the grid")
        terminal = payoff(self.spec.kind, self.grid.spots, self.spec.strike)
        if not np.array_equal(values[-1], terminal):
            raise NumericalError("terminal slice differs from the payoff")
        lowest = values.min()
        if lowest < -NEGATIVITY_TOL:
            raise NumericalError(f"surface has negative value {lowest:.3e}")
        values.setflags(write=False)
        times = np.linspace(0.0, self.spec.expiry, self.grid.nt + 1)
        times.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "times", times)

    @property
    def spots(self) -> np.ndarray:
        return self.grid.spots

    def at(self, spot, level: int = 0):
        """Cubic-spline interpolation in S at one time level (default t = 0)."""
        return CubicSpline(self.spots, self.values[level])(spot)

    def delta(self, spot, level: int = 0):
        """Derivative of the spline interpolant at ``spot``."""
        return CubicSpline(self.spots, self.values[level])(spot, 1)


class TridiagonalLU:
    """Thomas-algorithm factorisation of a tridiagonal matrix, reusable across solves.

    ``lower[0]`` and ``upper[-1]`` are ignored. Raises NumericalError if the
    matrix is not diagonally dominant or a pivot vanishes.
    """

    def __init__(self, lower, diag, upper):
        lower = [float(v) for v in lower]
        diag = [float(v) for v in diag]
        upper = [float(v) for v in upper]
        n = len(diag)
        if not (len(lower) == len(upper) == n) or n == 0:
            raise DomainError("diagonals must have equal, non-zero length")
        for i in range(n):
            off = (abs(lower[i]) if i > 0 else 0.0) + (abs(upper[i]) if i < n - 1 else 0.0)
            if abs(diag[i]) < off:
                raise NumericalError(f"row {i} of the tridiagonal system is not diagonally dominant")
        pivots = [0.0] * n
        ratios = [0.0] * n
        pivots[0] = diag[0]
        for i in range(1, n):
            if pivots[i - 1] == 0.0:
                raise NumericalError(f"zero pivot at row {i - 1}")
            ratios[i] = lower[i] / pivots[i - 1]
            pivots[i] = diag[i] - ratios[i] * upper[i - 1]
        if pivots[-1] == 0.0:
            raise NumericalError(f"zero pivot at row {n - 1}")
        self._ratios = ratios
        self._pivots = pivots
        self._upper = upper
        self.n = n

    def solve(self, rhs) -> np.ndarray:
        ratios, pivots, upper = self._ratios, self._pivots, self._upper
        y = [float(v) for v in rhs]
        n = self.n
        if len(y) != n:
            raise DomainError("right-hand side has the wrong length")
        for i in range(1, n):
            y[i] -= ratios[i] * y[i - 1]
        y[-1] /= pivots[-1]
        for i in range(n - 2, -1, -1):
            y[i] = (y[i] - upper[i] * y[i + 1]) / pivots[i]
        return np.array(y)


def solve_tridiagonal(lower, diag, upper, rhs) -> np.ndarray:
    return TridiagonalLU(lower, diag, upper).solve(rhs)


def backward_march(terminal, lower_bc, upper_bc, *, r: float, sigma: float,
                   expiry: float, grid: GridSpec) -> np.ndarray:
    """March ``V_t + sigma^2/2 S^2 V_SS + r S V_S - r V = 0`` back from ``t = T``.

    ``lower_bc``/``upper_bc`` hold Dirichlet values per time level (index 0 is
    t = 0). Takes raw ``r`` so the r = 0 case is reachable for maximum-principle
    checks; :func:`solve` is the validated entry point.
    """
    ns, nt = grid.ns, grid.nt
    dt = expiry / nt
    theta = grid.scheme.theta
    i = np.arange(1, ns - 1, dtype=float)
    diff = 0.5 * sigma**2 * i**2
    conv = 0.5 * r * i
    a = diff - conv            # coefficient of V_{i-1}
    b = -2.0 * diff - r        # coefficient of V_i
    c = diff + conv            # coefficient of V_{i+1}

    lu = TridiagonalLU(-theta * dt * a, 1.0 - theta * dt * b, -theta * dt * c)
    expl = (1.0 - theta) * dt
    out = np.empty((nt + 1, ns))
    out[nt] = terminal
    v = np.asarray(terminal, dtype=float)
    for j in range(nt - 1, -1, -1):
        rhs = v[1:-1] + expl * (a * v[:-2] + b * v[1:-1] + c * v[2:])
        lo, hi = lower_bc[j], upper_bc[j]
        rhs[0] += theta * dt * a[0] * lo
        rhs[-1] += theta * dt * c[-1] * hi
        v = np.empty(ns)
        v[0], v[-1] = lo, hi
        v[1:-1] = lu.solve(rhs)
        out[j] = v
    return out


def solve(spec: OptionSpec, params: MarketParams, grid: GridSpec) -> ValueSurface:
    """Value surface for a European option with the asymptotic boundary values.

    Call: ``V(0, t) = 0``, ``V(s_max, t) = s_max - E e^{-r(T-t)}``.
    Put: ``V(0, t) = E e^{-r(T-t)}``, ``V(s_max, t) = 0``.
    """
    if grid.s_max < 4.0 * spec.strike:
        raise PreconditionError("s_max must be at least 4x the strike")
    if spec.expiry <= 0:
        raise DomainError("expiry must be positive for a PDE solve")
    times = np.linspace(0.0, spec.expiry, grid.nt + 1)
    discounted = spec.strike * np.exp(-params.r * (spec.expiry - times))
    zeros = np.zeros_like(times)
    if spec.kind is OptionKind.CALL:
        lower, upper = zeros, grid.s_max - discounted
    else:
        lower, upper = discounted, zeros
    terminal = payoff(spec.kind, grid.spots, spec.strike)
    values = backward_march(terminal, lower, upper, r=params.r, sigma=params.sigma,
                            expiry=spec.expiry, grid=grid)
    return ValueSurface(values, grid, spec, params)


@dataclass(frozen=True)
class DominanceReport:
    """Outcome of comparing two volatilities over the interior nodes.

    ``w`` and ``w_exact`` are the FD and closed-form differences
    surface1 - surface2 restricted to the interior (``0 < t < T``, outermost
    spatial node next to each boundary dropped). A node is ``resolvable`` when
    the exact difference exceeds the combined FD error of the two surfaces
    there, i.e. when the sign of the FD difference is meaningful.
    """

    w: np.ndarray
    w_exact: np.ndarray
    resolvable: np.ndarray
    spots: np.ndarray
    times: np.ndarray
    min_w: float
    argmin_spot: float
    argmin_time: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.min_w > -self.tolerance

    @property
    def strictly_positive_where_resolvable(self) -> bool:
        return bool(np.all(self.w[self.resolvable] > 0.0))


def volatility_dominance(spec: OptionSpec, params1: MarketParams, params2: MarketParams,
                         grid: GridSpec, tolerance: float = 1e-8) -> DominanceReport:
    """Check that the higher-volatility option is worth more at interior nodes."""
    if params1.r != params2.r:
        raise PreconditionError("both parameter sets must share the interest rate")
    if not params1.sigma > params2.sigma:
        raise PreconditionError(
            f"need sigma1 > sigma2, got {params1.sigma} and {params2.sigma}"
        )
    surf1 = solve(spec, params1, grid)
    surf2 = solve(spec, params2, grid)
    inner = (slice(1, -1), slice(2, -2))
    w = (surf1.values - surf2.values)[inner]
    times = surf1.times[1:-1]
    spots = grid.spots[2:-2]

    tenor = (spec.expiry - times)[:, None]
    exact1 = closed_form.value_array(spec.kind, spots[None, :], tenor, spec.strike, params1)
    exact2 = closed_form.value_array(spec.kind, spots[None, :], tenor, spec.strike, params2)
    w_exact = exact1 - exact2
    fd_error = np.abs(surf1.values[inner] - exact1) + np.abs(surf2.values[inner] - exact2)
    idx = np.unravel_index(np.argmin(w), w.shape)
    return DominanceReport(
        w=w,
        w_exact=w_exact,
        resolvable=w_exact > fd_error,
        spots=spots,
        times=times,
        min_w=float(w[idx]),
        argmin_spot=float(spots[idx[1]]),
        argmin_time=float(times[idx[0]]),
        tolerance=tolerance,
    )
