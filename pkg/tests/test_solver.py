import csv
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpme.diagnostics import energy, mean, weighted_norm
from wpme.domain import Domain1D, DomainError
from wpme.solver import (
    Datum,
    PMEProblem,
    State,
    StepError,
    TimeControls,
    barenblatt_profile,
    boundary_outflow,
    build_grid,
    default_eps,
    flux_divergence,
    initial_state,
    phi_eps,
    phi_eps_prime,
    scale_exponent,
    scale_grid,
    scale_solution,
    solve,
    step,
    write_summary_csv,
    write_trajectory_csv,
)
from wpme.weights import exponential, lebesgue, power

INF = math.inf


def _phi_oracle(u, m, eps):
    """Independent high-precision quadrature of m (s^2 + eps^2)^((m-1)/2) on [0, |u|]."""
    with mp.workdps(30):
        e = mp.mpf(eps)
        f = lambda s: m * (s * s + e * e) ** ((mp.mpf(m) - 1) / 2)
        pts = [0] + [p for p in (eps, 2 * eps, 10 * eps) if p < abs(u)] + [abs(u)]
        return math.copysign(float(mp.quad(f, pts)), u)


@given(st.floats(1.01, 5.0), st.floats(-8, 0), st.floats(-10, 3), st.booleans())
@settings(max_examples=60)
def test_phi_eps_against_mpmath(m, leps, lu, neg):
    eps, u = 10.0**leps, 10.0**lu * (-1 if neg else 1)
    got = float(phi_eps(np.array([u]), m, eps)[0])
    assert math.isclose(got, _phi_oracle(u, m, eps), rel_tol=1e-10)


@given(st.floats(1.1, 4.0), st.floats(1e-6, 1.0))
@settings(max_examples=30)
def test_phi_eps_odd_monotone_and_derivative(m, eps):
    u = np.linspace(-3, 3, 601)
    p = phi_eps(u, m, eps)
    assert np.allclose(p, -p[::-1], rtol=0, atol=1e-14 * np.max(np.abs(p)))
    assert np.all(np.diff(p) > 0)
    h = 1e-5 * np.maximum(np.abs(u), eps)
    fd = (phi_eps(u + h, m, eps) - phi_eps(u - h, m, eps)) / (2 * h)
    assert np.allclose(fd, phi_eps_prime(u, m, eps), rtol=1e-6, atol=0)


def test_phi_eps_zero_is_signed_power():
    u = np.array([-2.0, -0.5, 0.0, 0.5, 2.0])
    assert np.allclose(phi_eps(u, 3.0, 0.0), np.sign(u) * np.abs(u) ** 3)
    with pytest.raises(DomainError):
        phi_eps(u, 1.0, 0.1)


@given(st.floats(1.2, 4.0), st.floats(0.5, 10.0))
@settings(max_examples=20)
def test_barenblatt_mass_is_conserved(m, t):
    k = 1.0 / (m + 1.0)

    def mass(tt):
        R = math.sqrt(2.0 * m / ((m - 1.0) * k)) * tt**k  # edge of the support for C = 1
        f = lambda x: float(barenblatt_profile(float(x), tt, m))
        return float(mp.quad(f, [-R, 0, R], method="tanh-sinh"))

    assert math.isclose(mass(t), mass(1.0), rel_tol=1e-8)


def test_datum_kinds_and_json():
    x = np.linspace(0.1, 0.9, 5)
    assert np.allclose(Datum("cospi", amplitude=2.0, offset=1.0)(x, 2.0), 1.0 + 2.0 * np.cos(np.pi * x))
    assert np.allclose(Datum("log1p")(x, 2.0), np.log1p(x))
    assert np.allclose(Datum("constant", offset=3.0)(x, 2.0), 3.0)
    for d in (Datum("bump", amplitude=2.0, center=0.3, width=0.1), Datum("table", table_x=(0.0, 1.0), table_y=(1.0, 2.0)), Datum("barenblatt", t0=2.0, m=3.0)):
        assert Datum.from_dict(d.to_dict()) == d
    with pytest.raises(DomainError):
        Datum.from_dict({"kind": "cospi", "width": 1.0})


def test_problem_validation():
    unit = Domain1D(0.0, 1.0)
    d = Datum("constant", offset=1.0)
    with pytest.raises(DomainError):
        PMEProblem(1.0, "neumann", lebesgue(), lebesgue(), unit, d)
    with pytest.raises(DomainError):
        PMEProblem(2.0, "robin", lebesgue(), lebesgue(), unit, d)
    with pytest.raises(DomainError):
        PMEProblem(2.0, "neumann", lebesgue(), lebesgue(), Domain1D(0.0, INF), d)
    with pytest.raises(DomainError):
        TimeControls(fixed_dt=-1.0)
    assert PMEProblem(2.0, ("dirichlet", "neumann"), lebesgue(), lebesgue(), unit, d).bc == ("dirichlet", "neumann")


def test_flux_divergence_balances_boundary_outflow():
    p = PMEProblem(2.0, ("dirichlet", "neumann"), power(1.0), power(2.0), Domain1D(0.5, 2.0), Datum("cospi", offset=2.0))
    g = build_grid(p, 40)
    phi = phi_eps(initial_state(p, g).u, 2.0, 1e-6)
    assert math.isclose(flux_divergence(g, phi).sum(), -boundary_outflow(g, phi), rel_tol=1e-12)


def test_dirichlet_step_mass_loss_equals_outflow():
    p = PMEProblem(2.0, "dirichlet", lebesgue(), lebesgue(), Domain1D(0.0, 1.0), Datum("cospi", offset=1.5, amplitude=0.5))
    g = build_grid(p, 50)
    s0 = initial_state(p, g)
    dt = 1e-3
    s1 = step(g, p, s0, dt, eps=1e-6)
    lost = g.masses @ (s0.u - s1.u)
    assert math.isclose(lost, dt * boundary_outflow(g, phi_eps(s1.u, 2.0, 1e-6)), rel_tol=1e-8)


def test_solve_prepends_zero_and_validates_times():
    p = PMEProblem(2.0, "neumann", lebesgue(), lebesgue(), Domain1D(0.0, 1.0), Datum("constant", offset=1.0))
    tr = solve(p, 20, [0.1, 0.2])
    assert np.allclose(tr.times, [0.0, 0.1, 0.2])
    assert np.allclose(tr.u, 1.0)
    assert tr.eps == default_eps(np.ones(20))
    with pytest.raises(DomainError):
        solve(p, 20, [0.2, 0.1])


def test_eps_continuation_reports_differences():
    p = PMEProblem(2.0, "neumann", lebesgue(), lebesgue(), Domain1D(0.0, 1.0), Datum("cospi", offset=1.0, amplitude=0.5), eps=1e-3, eps_schedule=(1e-5, 1e-7))
    tr = solve(p, 30, [0.05])
    cont = tr.diagnostics["continuation"]
    assert [c["eps"] for c in cont] == [1e-5, 1e-7] and tr.eps == 1e-7
    assert cont[1]["max_l1_difference"] < cont[0]["max_l1_difference"]


def test_step_error_after_halvings():
    ctl = TimeControls(max_newton=1, max_halvings=1, newton_tol=1e-15)
    p = PMEProblem(3.0, "dirichlet", lebesgue(), lebesgue(), Domain1D(0.0, 1.0), Datum("cospi", offset=5.0), controls=ctl)
    g = build_grid(p, 30)
    with pytest.raises(StepError) as info:
        step(g, p, initial_state(p, g), 1.0)
    assert len(info.value.history) == 2


def test_state_rejects_nan():
    with pytest.raises(FloatingPointError):
        State(0.0, np.array([1.0, np.nan]))


# -- structural properties on random small problems ------------------------------
weights = st.sampled_from([(lebesgue(), lebesgue()), (power(-1.0), power(1.0)), (exponential(0.7), exponential(0.7)), (power(1.0), power(3.0))])
tables = st.lists(st.floats(0.0, 2.0), min_size=6, max_size=6)


def _table_problem(m, bc, w, y, ctl=None):
    x = tuple(np.linspace(0.5, 2.0, len(y)))
    return PMEProblem(m, bc, w[0], w[1], Domain1D(0.5, 2.0), Datum("table", table_x=x, table_y=tuple(y)), eps=1e-6, controls=ctl or TimeControls())


TIMES = np.linspace(0.05, 0.3, 6)


@given(st.floats(1.3, 3.5), weights, tables)
@settings(max_examples=12)
def test_neumann_conserves_nu_mass(m, w, y):
    tr = solve(_table_problem(m, "neumann", w, y), 30, TIMES)
    total = tr.u @ tr.grid.masses
    assert np.allclose(total, total[0], rtol=1e-9, atol=1e-12)


@given(st.floats(1.3, 3.5), weights, st.sampled_from(["neumann", "dirichlet"]), tables, tables)
@settings(max_examples=12)
def test_l1_contraction_and_comparison(m, w, bc, y1, y2):
    ctl = TimeControls(fixed_dt=0.01)
    lo = np.minimum(y1, y2)
    a = solve(_table_problem(m, bc, w, y1, ctl), 30, TIMES)
    b = solve(_table_problem(m, bc, w, y2, ctl), 30, TIMES)
    c = solve(_table_problem(m, bc, w, lo, ctl), 30, TIMES)
    dist = np.abs(a.u - b.u) @ a.grid.masses
    assert np.all(np.diff(dist) <= 1e-12 * max(dist[0], 1e-300))
    assert np.all(c.u <= a.u) and np.all(c.u <= b.u)
    assert np.all(a.u >= 0)


@given(st.floats(1.3, 3.5), weights, st.sampled_from(["neumann", "dirichlet"]), tables, st.sampled_from([1.0, 2.0, 4.0, INF]))
@settings(max_examples=12)
def test_norms_and_energy_nonincreasing(m, w, bc, y, q):
    tr = solve(_table_problem(m, bc, w, y), 30, TIMES)
    norms = np.array([weighted_norm(s, tr.grid, q) for s in tr.states])
    assert np.all(np.diff(norms) <= 1e-10 * max(norms[0], 1e-300))
    en = np.array([energy(s, tr.grid, m) for s in tr.states])
    assert np.all(np.diff(en[1:]) <= 1e-9 * max(en[1], 1e-300))


# -- scaling ------------------------------------------------------------------------------
def test_scale_exponent_and_grid():
    assert scale_exponent(1, 2.0) == 2.0 and scale_exponent(2, 3.0) == 0.5
    p = PMEProblem(2.0, "neumann", lebesgue(), lebesgue(), Domain1D(0.0, 4.0), Datum("constant", offset=1.0))
    g = build_grid(p, 16)
    sg = scale_grid(g, 4.0, 1)
    assert np.allclose(sg.faces, g.faces / 4.0) and np.allclose(sg.masses, g.masses / 4.0) and np.allclose(sg.g, g.g * 4.0)


def test_scaled_solution_solves_scaled_problem():
    # u~(x~, t) = V^-2 u(V x~, t) for m = 2, N = 1 is again a solution on the scaled grid
    p = PMEProblem(2.0, "neumann", lebesgue(), lebesgue(), Domain1D(0.0, 4.0), Datum("bump", center=1.0, width=0.8), controls=TimeControls(fixed_dt=0.01))
    tr = solve(p, 80, [0.1, 0.2])
    st_ = scale_solution(tr, 4.0, 1)
    p2 = PMEProblem(2.0, "neumann", lebesgue(), lebesgue(), Domain1D(0.0, 1.0), Datum("bump", center=0.25, width=0.2, amplitude=1 / 16), eps=tr.eps / 16, controls=TimeControls(fixed_dt=0.01))
    tr2 = solve(p2, 80, [0.1, 0.2], grid=st_.grid)
    assert np.allclose(tr2.u, st_.u, rtol=1e-9, atol=1e-12)
    with pytest.raises(DomainError):
        scale_solution(tr, -1.0)


def test_csv_writers(tmp_path):
    p = PMEProblem(2.0, "neumann", lebesgue(), lebesgue(), Domain1D(0.0, 1.0), Datum("cospi", offset=1.0, amplitude=0.5))
    tr = solve(p, 10, [0.01, 0.02])
    write_trajectory_csv(tr, tmp_path / "t.csv")
    write_summary_csv(tr, tmp_path / "s.csv")
    rows = list(csv.DictReader(open(tmp_path / "t.csv")))
    assert len(rows) == 3 * 10 and float(rows[-1]["t"]) == 0.02
    summ = list(csv.DictReader(open(tmp_path / "s.csv")))
    assert list(summ[0]) == ["t", "norm1", "norm2", "normq", "normInf", "mean", "energy"]
    assert math.isclose(float(summ[-1]["mean"]), mean(tr.states[-1], tr.grid), rel_tol=0, abs_tol=0)
