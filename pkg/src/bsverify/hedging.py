"""Discrete delta hedging of a short European option along simulated GBM paths.

Each path ``p`` draws its normals from a Philox counter-based generator keyed
by the seed with the path index in the top counter word, so results do not
depend on how many paths are simulated or in which order. Uniforms are built
from the raw 64-bit output and mapped through the inverse normal CDF.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import ndtri

from . import closed_form
from .core import (
    DomainError,
    MarketParams,
    OptionSpec,
    PreconditionError,
    Quote,
    payoff,
)

__all__ = [
    "PathConfig",
    "HedgeReport",
    "standard_normals",
    "simulate_gbm",
    "simulate_paths",
    "delta_hedge",
    "convergence_slope",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class PathConfig:
    s0: float
    mu: float
    params: MarketParams
    steps: int
    horizon: float
    seed: int = 0

    def __post_init__(self):
        if not self.s0 > 0:
            raise DomainError(f"s0 must be positive, got {self.s0}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise DomainError(f"steps must be a positive integer, got {self.steps}")
        if not self.horizon > 0:
            raise DomainError(f"horizon must be positive, got {self.horizon}")
        if not math.isfinite(self.mu):
            raise DomainError("mu must be finite")
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)

    @property
    def dt(self) -> float:
        return self.horizon / self.steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.steps + 1)


@dataclass(frozen=True)
class HedgeReport:
    """Replication error of the hedged book at expiry.

    ``terminal_error`` is (replicating portfolio - payoff) per path. The
    ``max_rebalance_jump`` field records the largest relative change in
    portfolio value across a rebalance, which self-financing keeps at rounding
    level.
    """

    terminal_error: np.ndarray
    rms_error: float
    mean_error: float
    std_error: float
    paths: int
    dt: float
    premium: float
    max_rebalance_jump: float
    deltas: np.ndarray | None = None


def standard_normals(seed: int, path_index: int, n: int) -> np.ndarray:
    """``n`` standard normals for one path, reproducible from (seed, path_index)."""
    bitgen = np.random.Philox(key=int(seed) & _MASK64, counter=[0, 0, 0, int(path_index)])
    raw = bitgen.random_raw(n)
    uniforms = ((raw >> np.uint64(11)).astype(float) + 0.5) * 2.0**-53
    return ndtri(uniforms)


def simulate_gbm(cfg: PathConfig, path_index: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """One path of ``dS = mu S dt + sigma S dB`` using exact log-normal steps."""
    z = standard_normals(cfg.seed, path_index, cfg.steps)
    return cfg.times, _grow(cfg, z[None, :])[0]


def simulate_paths(cfg: PathConfig, n_paths: int, first_index: int = 0) -> np.ndarray:
    """Array of shape ``(n_paths, steps + 1)``; row ``p`` is path ``first_index + p``."""
    if n_paths < 1:
        raise DomainError("need at least one path")
    z = np.empty((n_paths, cfg.steps))
    for p in range(n_paths):
        z[p] = standard_normals(cfg.seed, first_index + p, cfg.steps)
    return _grow(cfg, z)


def _grow(cfg: PathConfig, z: np.ndarray) -> np.ndarray:
    sigma = cfg.params.sigma
    dt = cfg.dt
    increments = (cfg.mu - 0.5 * sigma**2) * dt + sigma * math.sqrt(dt) * z
    log_path = np.concatenate(
        [np.zeros((z.shape[0], 1)), np.cumsum(increments, axis=1)], axis=1
    )
    return cfg.s0 * np.exp(log_path)


def delta_hedge(cfg: PathConfig, spec: OptionSpec, n_paths: int = 10_000,
                keep_deltas: bool = False) -> HedgeReport:
    """Sell one option at the closed-form price and delta-hedge it to expiry.

    Shares are rebalanced at ``t_0 .. t_{n-1}``; cash accrues at ``r``. At ``T``
    the position is marked against the exact payoff.
    """
    if not math.isclose(spec.expiry, cfg.horizon, rel_tol=0.0, abs_tol=1e-12):
        raise PreconditionError("option expiry must equal the simulation horizon")
    params = cfg.params
    strike = spec.strike
    paths = simulate_paths(cfg, n_paths)
    times = cfg.times
    growth = math.exp(params.r * cfg.dt)

    premium = closed_form.price(Quote(cfg.s0, 0.0), spec, params).value
    spot = paths[:, 0]
    held = closed_form.delta_array(spec.kind, spot, spec.expiry, strike, params)
    cash = premium - held * spot
    deltas = np.empty((n_paths, cfg.steps)) if keep_deltas else None
    if keep_deltas:
        deltas[:, 0] = held
    worst_jump = 0.0
    for i in range(1, cfg.steps):
        spot = paths[:, i]
        cash = cash * growth
        stock = held * spot
        before = stock + cash
        target = closed_form.delta_array(spec.kind, spot, spec.expiry - times[i], strike, params)
        cash = cash - (target - held) * spot
        held = target
        after = held * spot + cash
        size = np.maximum(np.abs(stock) + np.abs(cash), 1e-300)
        worst_jump = max(worst_jump, float(np.max(np.abs(after - before) / size)))
        if keep_deltas:
            deltas[:, i] = held
    final_spot = paths[:, -1]
    book = held * final_spot + cash * growth
    errors = book - payoff(spec.kind, final_spot, strike)

    mean = float(errors.mean())
    return HedgeReport(
        terminal_error=errors,
        rms_error=float(np.sqrt(np.mean(errors**2))),
        mean_error=mean,
        std_error=float(errors.std(ddof=1) / math.sqrt(n_paths)) if n_paths > 1 else math.inf,
        paths=n_paths,
        dt=cfg.dt,
        premium=premium,
        max_rebalance_jump=worst_jump,
        deltas=deltas,
    )


def convergence_slope(cfg: PathConfig, spec: OptionSpec, steps: list[int],
                      n_paths: int = 10_000) -> tuple[float, list[HedgeReport]]:
    """Log-log slope of rms replication error against the rebalancing step."""
    reports = [delta_hedge(replace(cfg, steps=n), spec, n_paths) for n in steps]
    dts = np.log([r.dt for r in reports])
    rms = np.log([r.rms_error for r in reports])
    slope = float(np.polyfit(dts, rms, 1)[0])
    return slope, reports
