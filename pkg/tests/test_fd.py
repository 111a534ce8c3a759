
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import solve_banded

from bsverify import DomainError, MarketParams, NumericalError, OptionSpec, PreconditionError, closed_form
from bsverify import fd

REF = MarketParams(0.5, 0.3)
CALL = OptionSpec("call", 100, 1)
PUT = OptionSpec("put", 100, 1)
GRID = fd.GridSpec(400.0, 401, 400)


@settings(max_examples=30)
@given(st.integers(2, 60), st.integers(0, 2**32 - 1))
def test_thomas_matches_banded_solver(n, seed):
    rng = np.random.default_rng(seed)
    lower, upper = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
    diag = np.abs(lower) + np.abs(upper) + rng.uniform(0.1, 2.0, n)
    rhs = rng.normal(size=n)
    banded = np.zeros((3, n))
    banded[0, 1:] = upper[:-1]
    banded[1] = diag
    banded[2, :-1] = lower[1:]
    expected = solve_banded((1, 1), banded, rhs)
    assert fd.solve_tridiagonal(lower, diag, upper, rhs) == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_thomas_rejects_non_dominant():
    with pytest.raises(NumericalError):
        fd.TridiagonalLU([0, 2.0], [1.0, 1.0], [2.0, 0])


def test_grid_validation():
    with pytest.raises(DomainError):
        fd.GridSpec(0.0, 11, 10)
    with pytest.raises(DomainError):
        fd.GridSpec(400.0, 2, 10)
    with pytest.raises(DomainError):
        fd.GridSpec(400.0, 11, 0)
    assert fd.GridSpec.for_option(CALL, spot=150).s_max == 600.0


def test_terminal_slice_is_payoff():
    surf = fd.solve(CALL, REF, GRID)
    spots = GRID.spots
    assert surf.values[-1][np.flatnonzero(spots == 150.0)[0]] == 50.0
    assert surf.values[-1][np.flatnonzero(spots == 50.0)[0]] == 0.0
    assert np.array_equal(surf.values[-1], closed_form.payoff("call", spots, 100.0))


def test_surface_is_read_only():
    surf = fd.solve(CALL, REF, GRID)
    with pytest.raises(ValueError):
        surf.values[0, 0] = 1.0


def test_call_at_reference_parameters():
    grid = fd.GridSpec(400.0, 400, 400)
    surf = fd.solve(CALL, REF, grid)
    exact = closed_form.price(closed_form.Quote(100), CALL, REF).value
    assert float(surf.at(100.0)) == pytest.approx(exact, rel=1e-3)


def test_put_boundary_every_level():
    surf = fd.solve(PUT, REF, GRID)
    expected = 100 * np.exp(-0.5 * (1 - surf.times))
    assert np.max(np.abs(surf.values[:, 0] - expected)) <= 1e-6


def test_preconditions():
    with pytest.raises(PreconditionError):
        fd.solve(CALL, REF, fd.GridSpec(300.0, 101, 100))
    with pytest.raises(DomainError):
        fd.solve(OptionSpec("call", 100, 0.0), REF, GRID)


def test_implicit_maximum_principle_at_zero_rate():
    grid = fd.GridSpec(400.0, 201, 50, scheme=fd.Scheme.IMPLICIT)
    terminal = closed_form.payoff("put", grid.spots, 100.0)
    lower = np.full(grid.nt + 1, 100.0)
    upper = np.zeros(grid.nt + 1)
    v = fd.backward_march(terminal, lower, upper, r=0.0, sigma=0.3, expiry=1.0, grid=grid)
    for j in range(grid.nt - 1, -1, -1):
        pool = np.concatenate([v[j + 1], [lower[j], upper[j]]])
        assert pool.min() - 1e-12 <= v[j].min()
        assert v[j].max() <= pool.max() + 1e-12


@pytest.mark.parametrize("spec", [CALL, PUT], ids=["call", "put"])
def test_nonnegative_for_positive_rate(spec):
    assert fd.solve(spec, MarketParams(0.05, 0.2), GRID).values.min() >= -1e-10


@pytest.mark.parametrize("kind", ["call", "put"])
def test_crank_nicolson_second_order(kind):
    errors = []
    spec = OptionSpec(kind, 100, 1)
    for ns, nt in ((201, 100), (401, 200)):
        grid = fd.GridSpec(400.0, ns, nt)
        surf = fd.solve(spec, REF, grid)
        mask = (grid.spots >= 50) & (grid.spots <= 200)
        exact = closed_form.value_array(kind, grid.spots[mask], 1.0, 100.0, REF)
        errors.append(np.max(np.abs(surf.values[0][mask] - exact)))
    assert errors[0] / errors[1] >= 3.0


def test_grid_parity():
    call = fd.solve(CALL, REF, GRID)
    put = fd.solve(PUT, REF, GRID)
    tenor = (1.0 - call.times)[1:-1, None]
    target = GRID.spots[None, 1:-1] - 100 * np.exp(-0.5 * tenor)
    got = (call.values - put.values)[1:-1, 1:-1]
    assert np.max(np.abs(got - target) / np.abs(target)) <= 5e-3


def test_spline_delta_close_to_closed_form():
    surf = fd.solve(CALL, REF, GRID)
    exact = closed_form.delta(closed_form.Quote(100), CALL, REF)
    assert float(surf.delta(100.0)) == pytest.approx(exact, abs=1e-3)


def test_dominance_example():
    report = fd.volatility_dominance(OptionSpec("call", 100, 1), MarketParams(0.05, 0.4),
                                     MarketParams(0.05, 0.2), GRID)
    assert report.passed
    assert report.min_w > -1e-8
    assert report.strictly_positive_where_resolvable
    # underflow far out of the money, cancellation deep in it
    assert np.all(report.w_exact >= -1e-12 * 100)


def test_dominance_rejects_bad_ordering():
    with pytest.raises(PreconditionError):
        fd.volatility_dominance(CALL, MarketParams(0.05, 0.2), MarketParams(0.05, 0.2), GRID)
    with pytest.raises(PreconditionError):
        fd.volatility_dominance(CALL, MarketParams(0.05, 0.2), MarketParams(0.05, 0.4), GRID)
    with pytest.raises(PreconditionError):
        fd.volatility_dominance(CALL, MarketParams(0.05, 0.4), MarketParams(0.06, 0.2), GRID)


def test_surface_rejects_tampered_terminal():
    surf = fd.solve(CALL, REF, fd.GridSpec(400.0, 11, 4))
    values = surf.values.copy()
    values[-1, 5] += 1.0
    with pytest.raises(NumericalError):
        fd.ValueSurface(values, surf.grid, CALL, REF)
