import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from wpme.diagnostics import (
    BOUND_TAGS,
    FitError,
    MissingNormError,
    NormLaw,
    _exp_envelope,
    check_bound,
    dissipation_constant,
    energy,
    energy_identity_check,
    fit_exponential_decay,
    fit_power_decay,
    interior_compact_mask,
    mean,
    norm_series,
    weighted_norm,
)
from wpme.domain import Domain1D, DomainError
from wpme.grid import assemble_grid
from wpme.solver import Datum, PMEProblem, State, TimeControls, Trajectory, solve
from wpme.weights import lebesgue, power

INF = math.inf


@pytest.fixture(scope="module")
def grid():
    return assemble_grid(lebesgue(), lebesgue(), Domain1D(0.0, 1.0), 20, bc=("neumann", "neumann"), grading=1.0)


def synthetic(grid, times, amp, profile, m=2.0):
    states = [State(float(t), a * profile) for t, a in zip(times, amp)]
    return Trajectory(states, grid, m, 0.0)


@given(vals=st.lists(st.floats(-1e3, 1e3), min_size=20, max_size=20), q=st.sampled_from([1.0, 1.5, 2.0, 7.0, INF]))
def test_weighted_norm_matches_direct_sum(vals, q, grid):
    u = np.array(vals)
    direct = np.max(np.abs(u)) if q == INF else np.sum(grid.masses * np.abs(u) ** q) ** (1 / q)
    assert math.isclose(weighted_norm(u, grid, q), direct, rel_tol=1e-12, abs_tol=1e-300)


def test_weighted_norm_no_overflow_and_bad_q(grid):
    u = np.full(20, 1e200)
    assert math.isclose(weighted_norm(u, grid, 4.0), 1e200, rel_tol=1e-12)
    with pytest.raises(DomainError):
        weighted_norm(u, grid, 0.5)


def test_mean_and_energy_closed_forms(grid):
    u = grid.centers.copy()
    assert math.isclose(mean(u, grid), 0.5, rel_tol=1e-12)
    # u^2 jumps across the 19 interior faces with g = 1/h
    h = 0.05
    w = u**2
    assert math.isclose(energy(u, grid, 2.0), np.sum(np.diff(w) ** 2) / h, rel_tol=1e-12)


def test_dissipation_constant():
    assert math.isclose(dissipation_constant(1.0, 1.0), 2.0)
    assert math.isclose(dissipation_constant(1.0, 2.0), 4 * 2 * 2 / 9)


def test_energy_identity_defect_shrinks_with_output_refinement():
    p = PMEProblem(2.0, "neumann", power(1.0), power(1.0), Domain1D(0.5, 1.5), Datum("cospi", offset=1.0, amplitude=0.5), controls=TimeControls(dt_max=1e-4))
    for q in (1.0, 2.0):
        defects = []
        for n in (50, 200):
            tr = solve(p, 100, np.linspace(0.2 / n, 0.2, n))
            scale = tr.grid.masses @ np.abs(tr.states[0].u) ** (q + 1)
            defects.append(np.max(np.abs(energy_identity_check(tr, q))) / scale)
        assert defects[1] < 0.5 * defects[0] and defects[1] < 5e-3
    with pytest.raises(DomainError):
        energy_identity_check(tr, -1.0)


def test_interior_compact_mask(grid):
    mask = interior_compact_mask(grid)
    frac = grid.masses[mask].sum() / grid.total_mass
    assert 0.5 <= frac <= 0.7
    assert mask[10] and not mask[0] and not mask[-1]


@given(st.floats(-3.0, -0.1), st.floats(0.1, 10.0))
@settings(max_examples=30)
def test_fit_power_decay_exact(p, c):
    t = np.geomspace(1e-2, 1e2, 50)
    f = fit_power_decay(t, c * t**p)
    assert math.isclose(f.exponent, p, rel_tol=1e-10) and math.isclose(f.constant, c, rel_tol=1e-8)
    assert f.residual < 1e-10 and f.window == (1.0, 50.0)


@given(st.floats(0.1, 5.0), st.floats(0.1, 10.0))
@settings(max_examples=30)
def test_fit_exponential_decay_exact(k, c):
    t = np.linspace(0.0, 10.0, 101)
    f = fit_exponential_decay(t, c * np.exp(-k * t), window=(0.0, 10.0))
    assert math.isclose(f.exponent, k, rel_tol=1e-10) and math.isclose(f.constant, c, rel_tol=1e-8)


def test_fit_errors():
    t = np.linspace(1, 10, 5)
    with pytest.raises(FitError):
        fit_power_decay(t, t)
    t = np.linspace(0, 10, 100)
    with pytest.raises(FitError):
        fit_power_decay(t, t - 5, window=(0, 10))


def test_absolute_bound_constant_is_exact(grid):
    t = np.r_[0.0, np.geomspace(0.1, 10.0, 20)]
    amp = np.r_[1.0, 3.0 / t[1:]]
    tr = synthetic(grid, t, amp, np.ones(20))
    rep = check_bound(tr, "dirichlet_absolute", {"rho": 2.0})
    assert math.isclose(rep.constant, 3.0, rel_tol=1e-12)
    assert np.all(rep.margins >= -1e-12) and math.isclose(float(np.min(rep.margins)), 0.0, abs_tol=1e-12)


@given(amps=st.lists(st.floats(0.05, 2.0), min_size=12, max_size=12), tag=st.sampled_from(BOUND_TAGS))
@settings(max_examples=40)
def test_every_bound_is_tight_and_dominating(amps, tag, grid):
    # decaying oscillation around mean 1 so the centered bounds are meaningful
    t = np.r_[0.0, np.linspace(1.1, 6.0, 12)]
    amp = np.r_[1.0, np.minimum.accumulate(np.array(amps))]
    profile = np.cos(np.pi * grid.centers)
    states = [State(float(tt), 1.0 + a * profile) for tt, a in zip(t, amp)]
    tr = Trajectory(states, grid, 2.0, 0.0)
    rep = check_bound(tr, tag, {"q0": 1.0, "rho": 2.0})
    assert np.all(rep.margins >= -1e-9)
    if tag != "mean_exponential":
        assert float(np.min(rep.margins)) <= 1e-9


@given(st.lists(st.floats(-3, 3), min_size=4, max_size=15), st.lists(st.floats(0.01, 1.0), min_size=15, max_size=15))
@settings(max_examples=40)
def test_exp_envelope_matches_linear_program(logs, steps):
    log_r = np.array(logs)
    s = np.cumsum(steps)[: log_r.size]
    logK, H = _exp_envelope(log_r, s)
    # minimize logK + H s_end subject to log_r_i <= logK + H s_i, H >= 0
    A = np.column_stack([-np.ones_like(s), -s])
    res = linprog(c=[1.0, s[-1]], A_ub=A, b_ub=-log_r, bounds=[(None, None), (0, None)])
    assert res.status == 0
    assert math.isclose(logK + H * s[-1], res.fun, rel_tol=1e-9, abs_tol=1e-9)
    assert np.all(log_r <= logK + H * s + 1e-12)


def test_norm_law_factors():
    law = NormLaw(4.0, 1, 2.0)
    assert law.a == 2.0
    assert math.isclose(law.norm_factor(2.0), 4.0**-2.5)
    assert math.isclose(law.norm_factor(INF), 4.0**-2.0)
    assert math.isclose(law.value_factor(), 1 / 16)


def test_check_bound_rejects_bad_requests(grid):
    t = np.r_[0.0, np.geomspace(0.1, 1.0, 5)]
    tr = synthetic(grid, t, np.ones(6), np.ones(20))
    with pytest.raises(DomainError):
        check_bound(tr, "nope")
    with pytest.raises(MissingNormError):
        check_bound(tr, "dirichlet_absolute")


def test_norm_series_centered_and_masked(grid):
    t = np.linspace(0, 1, 3)
    tr = synthetic(grid, t, [1.0, 0.5, 0.25], 2.0 + np.cos(np.pi * grid.centers))
    c = norm_series(tr, 2, centered=True)
    assert c[0] > 0
    masked = norm_series(tr, INF, centered=True, mask=interior_compact_mask(grid))
    assert np.all(np.isfinite(masked))
