import math

import numpy as np
import pytest

from bsverify import DomainError, MarketParams, OptionSpec, PreconditionError
from bsverify import hedging

PARAMS = MarketParams(0.05, 0.2)
ATM = OptionSpec("call", 100, 1)


def cfg(**kw):
    base = dict(s0=100.0, mu=0.1, params=PARAMS, steps=64, horizon=1.0, seed=7)
    base.update(kw)
    return hedging.PathConfig(**base)


def test_config_validation():
    with pytest.raises(DomainError):
        cfg(s0=0.0)
    with pytest.raises(DomainError):
        cfg(steps=0)
    with pytest.raises(DomainError):
        cfg(horizon=0.0)
    assert cfg(seed=-1).seed == 2**64 - 1


def test_same_seed_same_path():
    a = hedging.simulate_gbm(cfg(), 3)[1]
    b = hedging.simulate_gbm(cfg(), 3)[1]
    assert np.array_equal(a, b)
    assert not np.array_equal(a, hedging.simulate_gbm(cfg(seed=8), 3)[1])


def test_paths_independent_of_batch():
    batch = hedging.simulate_paths(cfg(), 10)
    assert np.array_equal(batch[4], hedging.simulate_gbm(cfg(), 4)[1])
    assert np.array_equal(hedging.simulate_paths(cfg(), 3, first_index=4)[0], batch[4])


def test_near_zero_vol_is_deterministic_growth():
    _, spots = hedging.simulate_gbm(cfg(params=MarketParams(0.05, 1e-12)))
    assert spots[-1] == pytest.approx(100 * math.exp(0.1), rel=1e-6)


def test_normals_look_standard():
    z = hedging.standard_normals(1, 0, 200_000)
    assert abs(z.mean()) < 5 / math.sqrt(z.size)
    assert z.std() == pytest.approx(1.0, abs=0.01)


@pytest.mark.slow
def test_terminal_mean_lognormal():
    paths = hedging.simulate_paths(cfg(steps=1, seed=42), 100_000)
    terminal = paths[:, -1]
    se = terminal.std(ddof=1) / math.sqrt(terminal.size)
    assert abs(terminal.mean() - 100 * math.exp(0.1)) <= 3 * se


def test_expiry_must_match_horizon():
    with pytest.raises(PreconditionError):
        hedging.delta_hedge(cfg(horizon=0.5), ATM, 10)


def test_self_financing_and_rms():
    report = hedging.delta_hedge(cfg(steps=256, seed=42), ATM, 2000)
    assert report.max_rebalance_jump <= 1e-10
    assert report.rms_error < 0.05 * report.premium
    assert abs(report.mean_error) <= 3 * report.std_error


def test_report_reproducible():
    a = hedging.delta_hedge(cfg(), ATM, 200)
    b = hedging.delta_hedge(cfg(), ATM, 200)
    assert np.array_equal(a.terminal_error, b.terminal_error)


def test_worthless_call_under_zero_vol():
    params = MarketParams(0.05, 1e-12)
    report = hedging.delta_hedge(cfg(mu=0.0, params=params), OptionSpec("call", 200, 1), 20)
    assert np.max(np.abs(report.terminal_error)) <= 1e-12


def test_call_delta_bounds_along_paths():
    report = hedging.delta_hedge(cfg(steps=128), ATM, 500, keep_deltas=True)
    d = report.deltas
    assert np.all((d >= 0) & (d <= 1))
    # strictly inside (0, 1) wherever N(d+) is not rounded to 0 or 1; early half of the life
    early = d[:, : d.shape[1] // 2]
    assert np.all((early > 0) & (early < 1))


def test_put_hedge_runs():
    report = hedging.delta_hedge(cfg(steps=128), OptionSpec("put", 100, 1), 1000, keep_deltas=True)
    assert np.all((report.deltas >= -1) & (report.deltas <= 0))
    assert abs(report.mean_error) <= 3 * report.std_error


def test_convergence_slope_small_ensemble():
    slope, reports = hedging.convergence_slope(cfg(seed=42), ATM, [32, 64, 128, 256], 1000)
    assert 0.35 <= slope <= 0.65
    assert [r.dt for r in reports] == [1 / 32, 1 / 64, 1 / 128, 1 / 256]
