"""Acceptance gate: one test and one PASS/FAIL line per criterion, at the stated tolerances."""
import csv
import io
import time

from bsverify import verify
from bsverify.cli import build_parser, main


def run_checks(fn, *args, **kwargs):
    start = time.perf_counter()
    checks = fn(*args, **kwargs)
    return checks, time.perf_counter() - start


def summary(checks):
    return "; ".join(f"{c.name}={c.value:.3g}{'' if c.passed else ' (FAIL)'}" for c in checks)


def test_1_oracle_triangle(criterion):
    checks, elapsed = run_checks(verify.oracle_suite)
    by_name = {c.name: c for c in checks}
    gating = ["heat_vs_closed_rel", "fd_vs_closed_call_rel", "fd_vs_closed_put_rel"]
    ok = all(by_name[n].passed for n in gating) and elapsed <= 60.0
    assert criterion(1, "oracle triangle (heat <= 1e-6, FD CN 400x400 <= 1e-3 rel)", ok,
                     f"{summary(checks)}; {elapsed:.2f}s")


def test_2_put_call_parity(criterion):
    checks, elapsed = run_checks(verify.parity_suite, 1000, 0)
    ok = all(c.passed for c in checks) and elapsed <= 1.0
    assert criterion(2, "put-call parity |gap| <= 1e-10 over 1000 inputs", ok,
                     f"{summary(checks)}; {elapsed:.3f}s")


def test_3_boundary_and_terminal(criterion):
    checks, _ = run_checks(verify.boundary_suite)
    ok = all(c.passed for c in checks)
    assert criterion(3, "boundary and terminal conditions", ok, summary(checks))


def test_4_volatility_dominance(criterion):
    checks, elapsed = run_checks(verify.dominance_suite, pairs=20, samples=1000, seed=0)
    by_name = {c.name: c for c in checks}
    gating = ["fd_min_interior_w", "fd_random_pairs_min_w", "closed_form_min_w"]
    ok = all(by_name[n].passed for n in gating) and elapsed <= 30.0
    detail = "; ".join(f"{c.name}={c.value:.3g} [{c.detail}]" for c in checks)
    assert criterion(4, "volatility dominance, 20 random pairs, FD and closed form", ok,
                     f"{detail}; {elapsed:.2f}s")


def test_5_separable_residuals(criterion):
    checks, elapsed = run_checks(verify.separable_suite, 50, 100, 0)
    ok = all(c.passed for c in checks) and elapsed <= 1.0
    assert criterion(5, "separable-family residuals <= 1e-9 rel", ok, f"{summary(checks)}; {elapsed:.3f}s")


def test_6_heat_residual(criterion):
    checks, _ = run_checks(verify.heat_suite, 100, 0)
    residual = next(c for c in checks if c.name == "pde_residual")
    assert criterion(6, "heat-equation residual <= 1e-4 at 100 points", residual.passed, summary(checks))


def test_7_hedging_convergence(criterion):
    checks, elapsed = run_checks(verify.hedging_suite, 10_000, 42)
    by_name = {c.name: c for c in checks}
    gating = ["rms_slope", "mean_error_z", "drift_mean_error_z_mu_-0.2", "drift_mean_error_z_mu_+0.4"]
    ok = all(by_name[n].passed for n in gating) and elapsed <= 120.0
    assert criterion(7, "hedging slope in [0.4, 0.6], mean within 3 SE, drift independence", ok,
                     f"{summary(checks)}; {elapsed:.2f}s")


def _cli_rows(capsys, *argv):
    assert main(list(argv)) == 0
    return list(csv.DictReader(io.StringIO(capsys.readouterr().out)))


def test_8_figure_reproduction(criterion, capsys):
    call = _cli_rows(capsys, "curve", "--kind", "call")
    put = _cli_rows(capsys, "curve", "--kind", "put")
    call_ok = all(float(r["value"]) >= float(r["payoff"]) for r in call)
    put_zero = float(put[0]["value"])
    large = [r for r in put if float(r["spot"]) >= 120.0]
    put_ok = put_zero < 100.0 and all(float(r["value"]) > float(r["payoff"]) for r in large)
    defaults = build_parser().parse_args(["surface"])
    params_ok = (defaults.strike, defaults.rate, defaults.vol, defaults.tenor) == (100.0, 0.5, 0.3, 1.0)
    surface = _cli_rows(capsys, "surface")
    tenor_ok = max(float(r["tenor"]) for r in surface) == 1.0
    ok = call_ok and put_ok and params_ok and tenor_ok
    assert criterion(8, "curve and surface qualitative invariants and defaults", ok,
                     f"call>=payoff={call_ok}; put(0)={put_zero:.6g}<E and above payoff for S>=1.2E={put_ok}; "
                     f"surface E,r,sigma,T-t defaults={params_ok and tenor_ok}")


def test_9_fd_convergence_order(criterion):
    checks, _ = run_checks(verify.fd_convergence_suite)
    ok = all(c.passed for c in checks)
    assert criterion(9, "CN max-norm error ratio >= 3 when both steps halve", ok, summary(checks))
