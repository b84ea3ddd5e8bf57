"""One test per acceptance criterion.  Each prints a single PASS/FAIL line
(visible with ``pytest -s`` or in the captured output on failure)."""

import math
import time

import numpy as np
import pytest
import sympy as sp

from wpme.catalog import CATALOG
from wpme.diagnostics import NormLaw, check_bound, fit_power_decay, mean, norm_series
from wpme.domain import Domain1D
from wpme.poincare import HOLDS, c_alpha_beta, discrete_constant, dirichlet_poincare_verdict, hardy_BR, lemma_sides, zero_mean_verdict
from wpme.scenarios import run_scenario
from wpme.solver import Datum, PMEProblem, TimeControls, barenblatt_profile, scale_solution, solve
from wpme.weights import distance_power, exponential, gaussian, lebesgue, power

INF = math.inf

pytestmark = pytest.mark.slow


def report(n, ok, detail, started):
    line = f"[acceptance {n:2d}] {'PASS' if ok else 'FAIL'} ({time.time() - started:.1f}s) {detail}"
    print(line)
    assert ok, line


# -- 1 ---------------------------------------------------------------------
def test_01_hardy_functional_constancy():
    t0 = time.time()
    details, ok = [], True
    for beta in (2.0, 3.0, 5.0):
        f = hardy_BR(power(beta - 2.0), power(beta), 0.0, INF)
        exact = 1.0 / (beta - 1.0) ** 2
        # closed-form antiderivatives: int_0^x s^(b-2) = x^(b-1)/(b-1), int_x^inf s^-b = x^(1-b)/(b-1)
        oracle = (f.x ** (beta - 1) / (beta - 1)) * (f.x ** (1 - beta) / (beta - 1))
        prods = f.products()
        rel = abs(f.value - exact) / exact
        spread = prods.max() / prods.min() - 1.0
        vs_oracle = float(np.max(np.abs(prods / oracle - 1.0)))
        ok &= rel < 0.005 and spread < 0.005 and vs_oracle < 0.005
        details.append(f"beta={beta:g}: rel={rel:.1e} spread={spread:.1e}")
    elapsed = time.time() - t0
    report(1, ok and elapsed < 5, "; ".join(details), t0)


# -- 2 ---------------------------------------------------------------------
def test_02_discrete_spectral_oracles():
    t0 = time.time()
    unit = Domain1D(0.0, 1.0)
    ok, details = True, []
    for kind in ("dirichlet", "zero_mean"):
        dc = discrete_constant(kind, lebesgue(), lebesgue(), unit, grid_sizes=(250, 500, 1000, 2000))
        last = [t for t in dc.trace if t.cells == 2000][0].estimate
        errs = [abs(t.estimate * math.pi - 1.0) for t in dc.trace]
        ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
        second_order = all(3.5 < r < 4.5 for r in ratios)
        rel = abs(last * math.pi - 1.0)
        ok &= rel < 1e-3 and second_order
        details.append(f"{kind}: rel={rel:.1e} ratios={[round(r, 2) for r in ratios]}")
    dc = discrete_constant("dirichlet", exponential(-1.0), exponential(-1.0), Domain1D(0.0, INF), grid_sizes=(4000,), truncations=(80.0,))
    rel = abs(dc.last - 2.0) / 2.0
    ok &= rel < 0.02
    details.append(f"exp C_P={dc.last:.5f}")
    dc = discrete_constant("zero_mean", gaussian(0.5), gaussian(0.5), Domain1D(-INF, INF), grid_sizes=(500, 1000), truncations=(8.0, 12.0))
    rel = abs(dc.estimate - 1.0)
    ok &= rel < 0.02
    details.append(f"gaussian M_P={dc.estimate:.5f}")
    report(2, ok and time.time() - t0 < 30, "; ".join(details), t0)


# -- 3 ---------------------------------------------------------------------
def test_03_catalog_sweep():
    t0 = time.time()
    wrong = []
    for e in CATALOG.values():
        if e.kind == "dirichlet":
            v = dirichlet_poincare_verdict(e.nu, e.mu, e.domain).verdict
        else:
            v = zero_mean_verdict(e.nu, e.mu, e.domain).verdict
        expected = HOLDS if e.expected == "holds" else "fails"
        if v != expected:
            wrong.append((e.name, v))
    unit = Domain1D(0.0, 1.0)
    dc = discrete_constant("dirichlet", distance_power(-0.5, unit), distance_power(1.5, unit), unit, grid_sizes=(50, 100, 200, 400, 800))
    ok = not wrong and dc.diverging and time.time() - t0 < 120
    trace = [round(t.estimate, 3) for t in dc.trace]
    report(3, ok, f"{len(CATALOG)} entries, mismatches={wrong}; delta beta=1.5 trace={trace}", t0)


# -- 4 ---------------------------------------------------------------------
def _barenblatt_symbolic_residual():
    """u_t - (u^2)_xx for the m = 2 profile inside its support."""
    x, t, C = sp.symbols("x t C", positive=True)
    u = t ** sp.Rational(-1, 3) * (C - x**2 / (12 * t ** sp.Rational(2, 3)))
    return sp.simplify(sp.diff(u, t) - sp.diff(u**2, x, 2))


def _barenblatt_fd_residual(h):
    """Centered-difference residual of the closed-form profile on interior support points."""
    x = np.arange(-2.0, 2.0 + h / 2, h)
    t, dt = 2.0, h
    u = lambda tt: barenblatt_profile(x, tt, 2.0)
    ut = (u(t + dt) - u(t - dt)) / (2 * dt)
    w = u(t) ** 2
    lap = (w[2:] - 2 * w[1:-1] + w[:-2]) / h**2
    return float(np.max(np.abs(ut[1:-1] - lap)))


def test_04_barenblatt_oracle():
    t0 = time.time()
    sym = _barenblatt_symbolic_residual()
    fd = [_barenblatt_fd_residual(h) for h in (0.1, 0.05, 0.025)]
    oracle_ok = sym == 0 and fd[0] > fd[1] > fd[2] and fd[2] < 1e-3
    errs = {}
    for M in (800, 1600):
        p = PMEProblem(2.0, "dirichlet", lebesgue(), lebesgue(), Domain1D(-8.0, 8.0), Datum("barenblatt", t0=1.0), controls=TimeControls(dt_max=0.5 * 16 / M))
        tr = solve(p, M, [1.0])
        # solver time 1 is profile time t0 + 1 = 2
        ex = barenblatt_profile(tr.grid.centers, 2.0, 2.0)
        errs[M] = float(tr.grid.masses @ np.abs(tr.u[-1] - ex) / (tr.grid.masses @ np.abs(ex)))
    ratio = errs[800] / errs[1600]
    ok = oracle_ok and errs[800] < 0.02 and 1.8 <= ratio <= 2.2 and time.time() - t0 < 60
    report(4, ok, f"symbolic residual={sym}, fd residuals={[f'{r:.1e}' for r in fd]}, L1 err M=800 {errs[800]:.2e}, ratio {ratio:.2f}", t0)


# -- 5 ---------------------------------------------------------------------
def _random_weights(rng):
    fam = rng.integers(3)
    if fam == 0:
        return lebesgue(), lebesgue()
    if fam == 1:
        b = float(rng.uniform(-1.0, 3.0))
        return power(b - 2.0), power(b)
    a = float(rng.uniform(-1.0, 1.0))
    return exponential(a), exponential(a)


def _random_table(rng, lo, hi, base=None):
    x = np.linspace(lo, hi, 9)
    y = rng.uniform(0.0, 1.0, 9) if base is None else base + rng.uniform(0.0, 0.5, 9)
    return x, y


def test_05_conservation_contraction_comparison():
    t0 = time.time()
    rng = np.random.default_rng(20240501)
    dom = Domain1D(0.5, 2.0)
    times = np.linspace(0.05, 0.5, 10)
    M = 60
    # conservation
    drift = 0.0
    for _ in range(50):
        m = float(rng.uniform(1.5, 3.0))
        nu, mu = _random_weights(rng)
        d = Datum("cospi", amplitude=float(rng.uniform(0.1, 0.9)), offset=1.0, wavenumber=float(rng.integers(1, 4)))
        tr = solve(PMEProblem(m, "neumann", nu, mu, dom, d), M, times)
        m0 = mean(tr.states[0], tr.grid)
        drift = max(drift, max(abs(mean(s, tr.grid) - m0) / abs(m0) for s in tr.states))
    # contraction, comparison and positivity on shared fixed steps
    contraction, order, negative = 0.0, 0.0, 0.0
    ctl = TimeControls(fixed_dt=0.01)
    for k in range(50):
        m = float(rng.uniform(1.5, 3.0))
        nu, mu = _random_weights(rng)
        bc = ("neumann", "dirichlet")[k % 2]

        def run(x, y):
            p = PMEProblem(m, bc, nu, mu, dom, Datum("table", table_x=tuple(x), table_y=tuple(y)), eps=1e-6, controls=ctl)
            return solve(p, M, times)

        x, y1 = _random_table(rng, 0.5, 2.0)
        _, y2 = _random_table(rng, 0.5, 2.0)
        _, y3 = _random_table(rng, 0.5, 2.0, base=y1)
        a, b, c = run(x, y1), run(x, y2), run(x, y3)
        dist = np.array([a.grid.masses @ np.abs(sa.u - sb.u) for sa, sb in zip(a.states, b.states)])
        contraction = max(contraction, float(np.max(np.diff(dist)) / dist[0]))
        order = max(order, max(float(np.max(sa.u - sc.u)) for sa, sc in zip(a.states, c.states)))
        negative = min(negative, min(float(np.min(s.u)) for tr in (a, b, c) for s in tr.states))
    # increments below 1e-12 relative are roundoff
    ok = drift < 1e-8 and contraction <= 1e-12 and order <= 0.0 and negative >= 0.0 and time.time() - t0 < 180
    report(5, ok, f"mean drift {drift:.1e}, max L1 increment {contraction:.1e}, max order violation {order:.1e}, min value {negative:.1e}", t0)


# -- 6 ---------------------------------------------------------------------
def test_06_ar81_sharp_rate():
    t0 = time.time()
    ok, details = True, []
    for m in (2.0, 3.0):
        r = run_scenario("ar81", m=m)
        target = -1.0 / (m - 1.0)
        fit = fit_power_decay(r.trajectories["main"].times, norm_series(r.trajectories["main"], 2))
        fit_s = fit_power_decay(r.trajectories["scaled"].times, norm_series(r.trajectories["scaled"], 2))
        rel = abs(fit.exponent - target) / abs(target)
        shift = abs(fit_s.exponent - fit.exponent) / abs(fit.exponent)
        ok &= rel <= 0.10 and shift < 0.05 and r.passed
        details.append(f"m={m:g}: exponent {fit.exponent:.4f} (rel {rel:.1e}), x10 shift {shift:.1e}")
    report(6, ok and time.time() - t0 < 60, "; ".join(details), t0)


# -- 7 ---------------------------------------------------------------------
def test_07_dirichlet_smoothing_constant():
    t0 = time.time()
    K, slopes = {}, []
    for L in (20.0, 40.0):
        for M in (200, 400, 800):
            r = run_scenario("dirichlet_smoothing", L=L, M=M)
            K[(L, M)] = r.data["K1"]
            slopes.append(r.data["short_time_slope"])
    vals = np.array(list(K.values()))
    spread = vals.max() / vals.min() - 1.0
    ok = np.all(np.isfinite(vals)) and spread < 0.20 and min(slopes) >= -0.5 and time.time() - t0 < 120
    report(7, ok, f"K1 range [{vals.min():.4f}, {vals.max():.4f}] spread {spread:.1e}; min short-time slope {min(slopes):.4f} >= -0.5", t0)


# -- 8 ---------------------------------------------------------------------
def test_08_unbounded_counterexamples():
    t0 = time.time()
    ok, details = True, []
    for name in ("dirichlet_unbounded", "neumann_unbounded"):
        r = run_scenario(name, m=2.0)
        dom = [c for c in r.checks if c.name.startswith("dominates_subsolution")]
        growth = r.check("max_growth_ratio")
        ok &= r.passed and len(dom) == 2
        details.append(f"{name}: growth {growth.value:.3f} >= {growth.threshold:.3f}, domination margins {[round(c.value, 4) for c in dom]}")
    report(8, ok and time.time() - t0 < 120, "; ".join(details), t0)


# -- 9 ---------------------------------------------------------------------
def test_09_exponential_mean_convergence():
    t0 = time.time()
    r = run_scenario("neumann_mean_convergence", m=2.0)
    rates = [(run["mean"], run["rate_norm2"], run["residual"]) for run in r.data["runs"]]
    ok = r.passed and [u for u, _, _ in rates] == [0.5, 1.0, 2.0] and time.time() - t0 < 60
    report(9, ok, "rates " + ", ".join(f"mean {u:g}: {k:.4f} (res {e:.1e})" for u, k, e in rates), t0)


# -- 10 --------------------------------------------------------------------
def test_10_nonuniform_convergence():
    t0 = time.time()
    r = run_scenario("nonuniform_convergence", m=2.0, beta=2.0)
    names = ("below_supersolution", "vanishes_below_half_front", "positive_mean", "mean_gap_monotone")
    ok = r.passed and all(r.check(n).passed for n in names) and r.data["shrink_rate"] == 8.0 and time.time() - t0 < 60
    report(10, ok, ", ".join(f"{c.name}={c.value:.2e}" for c in r.checks), t0)


# -- 11 --------------------------------------------------------------------
def test_11_numeric_lemma():
    t0 = time.time()
    rng = np.random.default_rng(11)
    worst = -INF
    for _ in range(20):
        alpha = rng.uniform(0.02, 0.98)
        beta = rng.uniform(0.01, alpha * 0.999)
        x = 10.0 ** rng.uniform(-6, 6, 100_000)
        y = 10.0 ** rng.uniform(-6, 6, 100_000)
        lhs, rhs = lemma_sides(x, y, alpha, beta)
        worst = max(worst, float(np.max(lhs / rhs - 1.0)))
    exact = c_alpha_beta(0.5, 0.25) == 1.5
    ok = worst <= 1e-12 and exact and time.time() - t0 < 5
    report(11, ok, f"max (lhs/rhs - 1) = {worst:.2e}; c(1/2,1/4) = {c_alpha_beta(0.5, 0.25)!r}", t0)


# -- 12 --------------------------------------------------------------------
def test_12_scaling_law():
    t0 = time.time()
    V, m = 4.0, 2.0
    p = PMEProblem(m, "neumann", lebesgue(), lebesgue(), Domain1D(0.0, 4.0), Datum("bump", center=1.0, width=0.8))
    tr = solve(p, 200, np.geomspace(1e-3, 10.0, 40))
    st = scale_solution(tr, V, 1, m)
    worst = 0.0
    for q in (1.0, 2.0, 3.0, INF):
        expected = V ** (-2.0 / (m - 1.0) - (0.0 if q == INF else 1.0 / q))
        worst = max(worst, float(np.max(np.abs(norm_series(st, q) / norm_series(tr, q) / expected - 1.0))))
    k = check_bound(tr, "neumann_smoothing", {"q0": 2.0, "rho": 4.0}).constant
    ks = check_bound(st, "neumann_smoothing", {"q0": 2.0, "rho": 4.0}, norm_law=NormLaw(V, 1, m)).constant
    rel = abs(ks - k) / k
    ok = worst < 1e-13 and rel < 0.01 and time.time() - t0 < 30
    report(12, ok, f"max norm-ratio error {worst:.1e}; constants {k:.6g} vs {ks:.6g}", t0)
