"""Cross-checks between the pricing routes, grouped into named suites.

Each suite returns a list of :class:`Check` rows. The CLI ``verify`` command
prints them as CSV and exits non-zero if any row failed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import closed_form, fd, hedging, separable, transforms
from .core import BSError, MarketParams, OptionKind, OptionSpec, Quote, payoff

REF_STRIKE = 100.0
REF_PARAMS = MarketParams(r=0.5, sigma=0.3)
REF_TENOR = 1.0


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    threshold: float
    passed: bool
    detail: str = ""


def _random_params(rng, r=(0.01, 0.5), sigma=(0.05, 1.0)) -> MarketParams:
    return MarketParams(rng.uniform(*r), rng.uniform(*sigma))


def parity_suite(samples: int = 1000, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(samples):
        strike = rng.uniform(10.0, 500.0)
        spot = strike * math.exp(rng.uniform(math.log(0.2), math.log(5.0)))
        expiry = rng.uniform(0.01, 3.0)
        # every tenth sample sits exactly at expiry
        time = expiry if i % 10 == 0 else rng.uniform(0.0, expiry)
        gap = closed_form.parity_gap(Quote(spot, time), strike, expiry, _random_params(rng))
        worst = max(worst, abs(gap))
    return [Check("parity", "max_abs_gap", worst, 1e-10, worst <= 1e-10, f"{samples} samples")]


def boundary_suite(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    c_zero = p_zero = p_small = terminal = asym = 0.0
    for _ in range(50):
        params = _random_params(rng)
        strike = rng.uniform(10.0, 500.0)
        expiry = rng.uniform(0.05, 3.0)
        time = rng.uniform(0.0, expiry * 0.99)
        tau = expiry - time
        call = OptionSpec(OptionKind.CALL, strike, expiry)
        put = OptionSpec(OptionKind.PUT, strike, expiry)
        discounted = strike * math.exp(-params.r * tau)
        c_zero = max(c_zero, abs(closed_form.price(Quote(0.0, time), call, params).value))
        p_zero = max(p_zero, abs(closed_form.price(Quote(0.0, time), put, params).value - discounted))
        p_small = max(p_small, abs(
            closed_form.price(Quote(1e-12 * strike, time), put, params).value - discounted))
        s_exp = strike * rng.uniform(0.2, 5.0)
        terminal = max(
            terminal,
            abs(closed_form.price(Quote(s_exp, expiry), call, params).value - max(s_exp - strike, 0.0)),
            abs(closed_form.price(Quote(s_exp, expiry), put, params).value - max(strike - s_exp, 0.0)),
        )
        big = 1e6 * strike
        far = closed_form.price(Quote(big, time), call, params).value - (big - discounted)
        asym = max(asym, abs(far) / strike)
    return [
        Check("boundary", "call_at_zero_spot", c_zero, 0.0, c_zero == 0.0),
        Check("boundary", "put_at_zero_spot", p_zero, 1e-9, p_zero <= 1e-9),
        Check("boundary", "put_near_zero_spot", p_small, 1e-9, p_small <= 1e-9),
        Check("boundary", "terminal_payoff", terminal, 0.0, terminal == 0.0),
        Check("boundary", "call_asymptote_over_strike", asym, 1e-6, asym <= 1e-6),
    ]


def heat_oracle_grid():
    """The 5x5x3x3 (moneyness, tenor, sigma, r) grid used for the heat oracle."""
    return (
        np.linspace(0.2, 5.0, 5),
        np.linspace(0.05, 2.0, 5),
        np.linspace(0.1, 0.6, 3),
        np.linspace(0.01, 0.5, 3),
    )


def heat_vs_closed_max_error(strike: float = REF_STRIKE) -> float:
    worst = 0.0
    moneyness, tenors, sigmas, rates = heat_oracle_grid()
    for m in moneyness:
        for tenor in tenors:
            for sigma in sigmas:
                for r in rates:
                    params = MarketParams(r, sigma)
                    for kind in OptionKind:
                        spec = OptionSpec(kind, strike, tenor)
                        quote = Quote(m * strike, 0.0)
                        exact = closed_form.price(quote, spec, params).value
                        heat = transforms.price_via_heat_kernel(quote, spec, params)
                        worst = max(worst, abs(heat - exact) / max(exact, 1e-8))
    return worst


def fd_vs_closed(kind: OptionKind, grid: fd.GridSpec, lo: float = 0.5, hi: float = 2.0,
                 params: MarketParams = REF_PARAMS, strike: float = REF_STRIKE,
                 tenor: float = REF_TENOR):
    """Max relative and absolute FD error at grid nodes with S/E in [lo, hi]."""
    spec = OptionSpec(kind, strike, tenor)
    surface = fd.solve(spec, params, grid)
    spots = grid.spots
    mask = (spots >= lo * strike) & (spots <= hi * strike)
    exact = closed_form.value_array(kind, spots[mask], tenor, strike, params)
    err = np.abs(surface.values[0][mask] - exact)
    return float(np.max(err / exact)), float(np.max(err))


def oracle_suite() -> list[Check]:
    heat = heat_vs_closed_max_error()
    grid = fd.GridSpec(4 * REF_STRIKE, 400, 400)
    fd_call, _ = fd_vs_closed(OptionKind.CALL, grid)
    fd_put, _ = fd_vs_closed(OptionKind.PUT, grid)

    call = fd.solve(OptionSpec("call", REF_STRIKE, REF_TENOR), REF_PARAMS, grid)
    put = fd.solve(OptionSpec("put", REF_STRIKE, REF_TENOR), REF_PARAMS, grid)
    tenor = (REF_TENOR - call.times)[1:-1, None]
    target = grid.spots[None, 1:-1] - REF_STRIKE * np.exp(-REF_PARAMS.r * tenor)
    got = (call.values - put.values)[1:-1, 1:-1]
    parity_rel = float(np.max(np.abs(got - target) / np.abs(target)))
    return [
        Check("oracle", "heat_vs_closed_rel", heat, 1e-6, heat <= 1e-6, "5x5x3x3 grid, both kinds"),
        Check("oracle", "fd_vs_closed_call_rel", fd_call, 1e-3, fd_call <= 1e-3,
              "CN 400x400, S/E in [0.5, 2]"),
        Check("oracle", "fd_vs_closed_put_rel", fd_put, 1e-3, fd_put <= 1e-3,
              "CN 400x400, S/E in [0.5, 2]"),
        Check("oracle", "fd_grid_parity_rel", parity_rel, 5e-3, parity_rel <= 5e-3),
    ]


def dominance_pairs(n: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        low = rng.uniform(0.1, 0.5)
        high = low + rng.uniform(0.05, 0.5)
        r = rng.uniform(0.01, 0.5)
        yield MarketParams(r, high), MarketParams(r, low), rng.uniform(0.25, 2.0)


def dominance_suite(pairs: int = 20, samples: int = 1000, seed: int = 0,
                    vol_pair: tuple[float, float] = (0.4, 0.2)) -> list[Check]:
    """FD and closed-form volatility dominance.

    Every FD comparison (``vol_pair`` at r = 0.05, T = 1, then the random
    pairs) is held to the interior contract ``min W > -1e-8``. A second row
    restricts attention to nodes where the exact difference exceeds the
    combined FD error, i.e. where the sign of the FD difference is meaningful.
    """
    grid = fd.GridSpec(4 * REF_STRIKE, 401, 400)
    spec = OptionSpec(OptionKind.CALL, REF_STRIKE, 1.0)
    try:
        anchor = fd.volatility_dominance(
            spec, MarketParams(0.05, vol_pair[0]), MarketParams(0.05, vol_pair[1]), grid)
    except BSError as exc:
        return [Check("dominance", "precondition", math.nan, 0.0, False, str(exc))]
    checks = [Check("dominance", "fd_min_interior_w", anchor.min_w, -anchor.tolerance,
                    anchor.passed, f"sigma {vol_pair[0]:g} vs {vol_pair[1]:g}")]

    reports = [fd.volatility_dominance(OptionSpec(OptionKind.CALL, REF_STRIKE, expiry), p1, p2, grid)
               for p1, p2, expiry in dominance_pairs(pairs, seed)]
    worst = min(reports, key=lambda rep: rep.min_w)
    within = sum(rep.passed for rep in reports)
    checks.append(Check("dominance", "fd_random_pairs_min_w", worst.min_w, -worst.tolerance,
                        within == pairs,
                        f"{within} of {pairs} pairs within contract; worst at S={worst.argmin_spot:g} "
                        f"t={worst.argmin_time:.4g}"))
    strict_ok = anchor.strictly_positive_where_resolvable and all(
        rep.strictly_positive_where_resolvable for rep in reports)
    tested = int(anchor.resolvable.sum()) + sum(int(rep.resolvable.sum()) for rep in reports)
    checks.append(Check("dominance", "fd_strict_where_resolvable", float(strict_ok), 1.0, strict_ok,
                        f"{tested} resolvable nodes over {pairs + 1} pairs"))

    rng = np.random.default_rng(seed + 1)
    cf_min = math.inf
    for _ in range(samples):
        low = rng.uniform(0.1, 0.5)
        high = low + rng.uniform(0.01, 0.5)
        r = rng.uniform(0.01, 0.5)
        strike = rng.uniform(50.0, 150.0)
        spot = strike * rng.uniform(0.5, 2.0)
        tenor = rng.uniform(0.25, 2.0)
        kind = OptionKind.CALL if rng.random() < 0.5 else OptionKind.PUT
        spec = OptionSpec(kind, strike, tenor)
        w = (closed_form.price(Quote(spot), spec, MarketParams(r, high)).value
             - closed_form.price(Quote(spot), spec, MarketParams(r, low)).value)
        cf_min = min(cf_min, w)
    checks.append(Check("dominance", "closed_form_min_w", cf_min, 0.0, cf_min > 0.0,
                        f"{samples} points"))
    return checks


def _separable_param_sets(n: int, rng, family: str):
    found = 0
    while found < n:
        params = _random_params(rng, sigma=(0.1, 1.0))
        rate = rng.uniform(-1.0, 1.0)
        try:
            if family == "euler":
                sol = separable.EulerSolution.build(rate, params, *rng.uniform(-2.0, 2.0, 2))
            else:
                sol = separable.SeparableSolution.build(rate, params, tuple(rng.uniform(-2.0, 2.0, 2)))
        except BSError:
            continue
        found += 1
        yield sol


def separable_suite(param_sets: int = 50, points: int = 100, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    for family, evaluate, residual in (
        ("euler", separable.euler_eval, separable.euler_residual),
        ("product", separable.separable_eval, separable.separable_residual),
    ):
        worst = 0.0
        for sol in _separable_param_sets(param_sets, rng, family):
            for s, t in zip(rng.uniform(0.5, 2.0, points), rng.uniform(0.0, 2.0, points)):
                worst = max(worst, abs(residual(sol, s, t)) / (1.0 + abs(evaluate(sol, s, t))))
        out.append(Check("separable", f"{family}_residual_rel", float(worst), 1e-9, bool(worst <= 1e-9),
                         f"{param_sets} sets x {points} points"))
    return out


def heat_residual_max(points: int = 100, seed: int = 0, step: float = 1e-3,
                      params: MarketParams = MarketParams(0.05, 0.3)) -> float:
    """Largest |nu_tau - nu_xx| by central differences at random interior points."""
    rng = np.random.default_rng(seed)
    ctx = transforms.TransformContext(REF_STRIKE, 1.0, params)
    worst = 0.0
    for i in range(points):
        g = transforms.payoff_initial_condition(ctx, "call" if i % 2 == 0 else "put")
        x, tau = rng.uniform(-1.0, 1.0), rng.uniform(0.05, 0.5)

        def nu(dx: float, dtau: float) -> float:
            return transforms.heat_solution(g, transforms.DimensionlessPoint(x + dx, tau + dtau))

        centre = nu(0.0, 0.0)
        nu_tau = (nu(0.0, step) - nu(0.0, -step)) / (2 * step)
        nu_xx = (nu(step, 0.0) - 2 * centre + nu(-step, 0.0)) / step**2
        worst = max(worst, abs(nu_tau - nu_xx))
    return worst


def heat_suite(points: int = 100, seed: int = 0) -> list[Check]:
    worst = heat_residual_max(points, seed)
    moment = 0.0
    for a in (0.5, 1.0, 2.0):
        g = transforms.InitialCondition(lambda y, a=a: np.exp(a * y), growth=(a,))
        for x, tau in ((-0.5, 0.1), (0.0, 0.5), (0.7, 1.0)):
            got = transforms.heat_solution(g, transforms.DimensionlessPoint(x, tau))
            moment = max(moment, abs(got / math.exp(a * x + a * a * tau) - 1.0))
    return [
        Check("heat", "pde_residual", worst, 1e-4, worst <= 1e-4, f"{points} points, step 1e-3"),
        Check("heat", "gaussian_moment_rel", moment, 1e-8, moment <= 1e-8),
    ]


def fd_convergence_errors(kind: OptionKind, sizes=((201, 100), (401, 200))) -> list[float]:
    return [fd_vs_closed(kind, fd.GridSpec(4 * REF_STRIKE, ns, nt))[1] for ns, nt in sizes]


def fd_convergence_suite() -> list[Check]:
    out = []
    for kind in OptionKind:
        coarse, fine = fd_convergence_errors(kind)
        ratio = coarse / fine
        out.append(Check("fd-convergence", f"{kind.value}_error_ratio", ratio, 3.0, ratio >= 3.0))
    return out


HEDGE_SPEC = OptionSpec(OptionKind.CALL, 100.0, 1.0)
HEDGE_PARAMS = MarketParams(0.05, 0.2)
HEDGE_STEPS = [64, 128, 256, 512, 1024]


def hedging_suite(paths: int = 10_000, seed: int = 42) -> list[Check]:
    cfg = hedging.PathConfig(100.0, 0.1, HEDGE_PARAMS, HEDGE_STEPS[0], 1.0, seed)
    slope, reports = hedging.convergence_slope(cfg, HEDGE_SPEC, HEDGE_STEPS, paths)
    by_steps = dict(zip(HEDGE_STEPS, reports))
    ratio = by_steps[256].rms_error / by_steps[512].rms_error
    premium_share = by_steps[256].rms_error / by_steps[256].premium
    worst_z = max(abs(r.mean_error) / r.std_error for n, r in by_steps.items() if n >= 128)
    jump = max(r.max_rebalance_jump for r in reports)
    out = [
        Check("hedging", "rms_slope", slope, 0.5, 0.4 <= slope <= 0.6, "accept [0.4, 0.6]"),
        Check("hedging", "rms_ratio_256_512", ratio, math.sqrt(2), 1.2 <= ratio <= 1.7,
              "accept [1.2, 1.7]"),
        Check("hedging", "rms_over_premium_256", premium_share, 0.05, premium_share < 0.05),
        Check("hedging", "mean_error_z", worst_z, 3.0, worst_z <= 3.0, "n >= 128, mu = 0.1"),
        Check("hedging", "self_financing_jump", jump, 1e-10, jump <= 1e-10),
    ]
    for mu in (-0.2, 0.4):
        report = hedging.delta_hedge(
            hedging.PathConfig(100.0, mu, HEDGE_PARAMS, HEDGE_STEPS[-1], 1.0, seed),
            HEDGE_SPEC, paths)
        z = abs(report.mean_error) / report.std_error
        out.append(Check("hedging", f"drift_mean_error_z_mu_{mu:+g}", z, 3.0, z <= 3.0,
                         f"n = {HEDGE_STEPS[-1]}"))
    return out


def curve_samples(kind, strike=REF_STRIKE, params=REF_PARAMS, tenor=REF_TENOR,
                  spot_min=0.0, spot_max=None, samples=201):
    spots = np.linspace(spot_min, 2.0 * strike if spot_max is None else spot_max, samples)
    values = closed_form.value_array(kind, spots, tenor, strike, params)
    return spots, values, payoff(kind, spots, strike)


def figure_suite() -> list[Check]:
    spots, call, call_payoff = curve_samples("call")
    _, put, put_payoff = curve_samples("put")
    call_gap = float(np.min(call - call_payoff))
    put_at_zero = float(put[0])
    large = spots >= 1.2 * REF_STRIKE
    put_above = float(np.min(put[large] - put_payoff[large]))
    return [
        Check("figures", "call_minus_payoff_min", call_gap, 0.0, call_gap >= 0.0),
        Check("figures", "put_at_zero_below_strike", put_at_zero, REF_STRIKE,
              put_at_zero < REF_STRIKE),
        Check("figures", "put_above_payoff_large_s", put_above, 0.0, put_above > 0.0),
    ]


SUITES: dict[str, Callable[..., list[Check]]] = {
    "parity": parity_suite,
    "boundary": boundary_suite,
    "oracle": oracle_suite,
    "dominance": dominance_suite,
    "separable": separable_suite,
    "heat": heat_suite,
    "fd-convergence": fd_convergence_suite,
    "figures": figure_suite,
    "hedging": hedging_suite,
}


def run(suites=None, samples: int | None = None, seed: int = 0,
        vol_pair: tuple[float, float] = (0.4, 0.2), paths: int | None = None) -> list[Check]:
    names = list(SUITES) if not suites or "all" in suites else list(suites)
    checks: list[Check] = []
    for name in names:
        if name == "parity":
            checks += parity_suite(samples or 1000, seed)
        elif name == "dominance":
            checks += dominance_suite(samples=samples or 1000, seed=seed, vol_pair=vol_pair)
        elif name == "hedging":
            checks += hedging_suite(paths or 10_000)
        elif name in ("boundary", "separable", "heat"):
            checks += SUITES[name](seed=seed)
        else:
            checks += SUITES[name]()
    return checks
