"""Implicit finite-volume solver for rho_nu u_t = (rho_mu (u^m)_x)_x in 1D.

The nonlinearity u^m (signed power) is replaced by the smooth odd function
Phi_eps with Phi_eps'(u) = m (u^2 + eps^2)^((m-1)/2), which makes every
implicit step uniformly parabolic.  Steps are implicit Euler solved by a
damped Newton iteration on the tridiagonal Jacobian.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .domain import Domain1D, DomainError
from .grid import Grid, assemble_grid
from .weights import WeightSpec

# -- the regularized nonlinearity --------------------------------------------
_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)
_SERIES_TERMS = 40
_SPLIT = 2.0  # in units of eps: quadrature below, binomial series above


def phi_eps_prime(u, m: float, eps: float):
    """Phi_eps'(u) = m (u^2 + eps^2)^((m-1)/2); m |u|^(m-1) at eps = 0."""
    u = np.asarray(u, dtype=float)
    if eps == 0:
        return m * np.abs(u) ** (m - 1.0)
    return m * (u * u + eps * eps) ** (0.5 * (m - 1.0))


def _j_small(X, a):
    """int_0^X (s^2 + 1)^a ds for 0 <= X <= 2 by 24-point Gauss-Legendre."""
    half = 0.5 * X[:, None]
    s = half * (1.0 + _GL_X[None, :])
    return (half[:, 0]) * ((s * s + 1.0) ** a @ _GL_W)


def _j_large_increment(X, a):
    """int_2^X (s^2 + 1)^a ds for X > 2 by termwise integration of the
    binomial series of s^(2a) (1 + s^-2)^a, whose ratio is at most 1/4."""
    out = np.zeros_like(X)
    y = np.log(X / _SPLIT)
    c = 1.0
    for k in range(_SERIES_TERMS):
        if k > 0:
            c *= (a - k + 1) / k
            if c == 0.0:
                break
        p = 2.0 * a - 2.0 * k + 1.0
        if p == 0.0:
            term = y
        else:
            term = _SPLIT**p * np.expm1(p * y) / p
        out += c * term
    return out


def phi_eps(u, m: float, eps: float):
    """Phi_eps(u) = int_0^u Phi_eps'(s) ds, odd, with Phi_eps(0) = 0.

    eps = 0 gives the signed power |u|^m sign(u).  For eps > 0 the integral
    is m eps^m J(|u|/eps) with J(X) = int_0^X (s^2+1)^((m-1)/2) ds evaluated
    by fixed-order Gauss-Legendre on [0, min(X, 2)] plus a convergent binomial
    series on [2, X].
    """
    if not m > 1:
        raise DomainError("phi_eps needs m > 1")
    u = np.asarray(u, dtype=float)
    if eps == 0:
        return np.sign(u) * np.abs(u) ** m
    a = 0.5 * (m - 1.0)
    X = np.abs(u).ravel() / eps
    J = np.empty_like(X)
    small = X <= _SPLIT
    if np.any(small):
        J[small] = _j_small(X[small], a)
    if np.any(~small):
        J[~small] = _j_small(np.array([_SPLIT]), a)[0] + _j_large_increment(X[~small], a)
    return (np.sign(u).ravel() * m * eps**m * J).reshape(u.shape)


# -- problem description -------------------------------------------------------
DATUM_KINDS = ("log1p", "logx2p2", "cospi", "bump", "barenblatt", "constant", "table")


def barenblatt_profile(x, t, m: float, C: float = 1.0, center: float = 0.0):
    """Self-similar source solution of u_t = (u^m)_xx on the line:
    t^(-k) (C - (m-1) k / (2m) * y^2 t^(-2k))_+^(1/(m-1)) with k = 1/(m+1)."""
    k = 1.0 / (m + 1.0)
    y = np.asarray(x, dtype=float) - center
    core = C - (m - 1.0) * k / (2.0 * m) * y * y * t ** (-2.0 * k)
    return t ** (-k) * np.maximum(core, 0.0) ** (1.0 / (m - 1.0))


@dataclass(frozen=True)
class Datum:
    """Closed-form initial datum u0(x).

    log1p      offset + amplitude * log(|x| + 1)
    logx2p2    offset + amplitude * log(x^2 + 2)
    cospi      offset + amplitude * cos(wavenumber * pi * x)
    bump       offset + amplitude * (1 - ((x - center)/width)^2)_+^2
    barenblatt the self-similar profile at time t0 (exponent m, constant C)
    constant   offset
    table      piecewise-linear interpolation of (table_x, table_y)
    """

    kind: str
    amplitude: float = 1.0
    offset: float = 0.0
    wavenumber: float = 1.0
    center: float = 0.0
    width: float = 1.0
    t0: float = 1.0
    C: float = 1.0
    m: float | None = None
    table_x: tuple = ()
    table_y: tuple = ()

    def __post_init__(self):
        if self.kind not in DATUM_KINDS:
            raise DomainError(f"unknown datum kind {self.kind!r}")
        if self.kind == "table":
            tx = np.asarray(self.table_x, dtype=float)
            if tx.size < 2 or len(self.table_y) != tx.size or np.any(np.diff(tx) <= 0):
                raise DomainError("table datum needs increasing table_x and matching table_y")
            object.__setattr__(self, "table_x", tuple(float(v) for v in self.table_x))
            object.__setattr__(self, "table_y", tuple(float(v) for v in self.table_y))
        if self.kind == "bump" and not self.width > 0:
            raise DomainError("bump width must be positive")
        if self.kind == "barenblatt" and not self.t0 > 0:
            raise DomainError("barenblatt t0 must be positive")

    def __call__(self, x, m: float | None = None):
        x = np.asarray(x, dtype=float)
        k = self.kind
        if k == "log1p":
            return self.offset + self.amplitude * np.log1p(np.abs(x))
        if k == "logx2p2":
            return self.offset + self.amplitude * np.log(x * x + 2.0)
        if k == "cospi":
            return self.offset + self.amplitude * np.cos(self.wavenumber * math.pi * x)
        if k == "bump":
            s = (x - self.center) / self.width
            return self.offset + self.amplitude * np.maximum(1.0 - s * s, 0.0) ** 2
        if k == "barenblatt":
            mm = self.m if self.m is not None else m
            if mm is None:
                raise DomainError("barenblatt datum needs an exponent m")
            return barenblatt_profile(x, self.t0, mm, self.C, self.center)
        if k == "constant":
            return np.full_like(x, self.offset)
        return np.interp(x, self.table_x, self.table_y)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        defaults = Datum.__dataclass_fields__
        for key in _DATUM_KEYS[self.kind]:
            val = getattr(self, key)
            if isinstance(val, tuple):
                val = list(val)
            if key not in ("table_x", "table_y") and val == defaults[key].default:
                continue
            out[key] = val
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Datum":
        d = dict(d)
        kind = d.pop("kind")
        unknown = set(d) - set(_DATUM_KEYS.get(kind, ()))
        if unknown:
            raise DomainError(f"unknown keys for {kind!r} datum: {sorted(unknown)}")
        for key in ("table_x", "table_y"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(kind=kind, **d)


_DATUM_KEYS = {
    "log1p": ("amplitude", "offset"),
    "logx2p2": ("amplitude", "offset"),
    "cospi": ("amplitude", "offset", "wavenumber"),
    "bump": ("amplitude", "offset", "center", "width"),
    "barenblatt": ("t0", "C", "m", "center"),
    "constant": ("offset",),
    "table": ("table_x", "table_y"),
}


@dataclass(frozen=True)
class TimeControls:
    """Time-stepping policy.

    Adaptive mode grows dt by ``growth`` after steps needing fewer than
    ``target_iters[0]`` Newton iterations and halves it above
    ``target_iters[1]``; dt never exceeds ``dt_max`` or ``dt_rel * t``
    (the latter only once t > dt_init).  ``fixed_dt`` switches adaptivity
    off, which makes two runs share their step sequence exactly.
    """

    dt_init: float = 1e-4
    dt_max: float = math.inf
    dt_rel: float = 0.05
    fixed_dt: float | None = None
    newton_tol: float = 1e-10
    max_newton: int = 30
    max_halvings: int = 20
    target_iters: tuple = (3, 6)
    growth: float = 1.25

    def __post_init__(self):
        if not self.dt_init > 0 or not self.dt_max > 0 or not self.dt_rel > 0:
            raise DomainError("time-step bounds must be positive")
        if self.fixed_dt is not None and not self.fixed_dt > 0:
            raise DomainError("fixed_dt must be positive")
        if not self.newton_tol > 0:
            raise DomainError("newton_tol must be positive")


@dataclass(frozen=True)
class PMEProblem:
    """Problem data.  ``bc`` is the boundary kind at the original endpoints
    (one kind for both, or a pair); truncation faces of an unbounded domain
    follow ``far_policy``.  ``eps=None`` selects 1e-6 * max(1, ||u0||_inf)."""

    m: float
    bc: object
    nu: WeightSpec
    mu: WeightSpec
    domain: Domain1D
    datum: Datum
    truncation: float | None = None
    far_policy: str = "neumann"
    eps: float | None = None
    eps_schedule: tuple = ()
    controls: TimeControls = field(default_factory=TimeControls)
    grading: object = None

    def __post_init__(self):
        if not self.m > 1:
            raise DomainError("the exponent m must exceed 1")
        bc = (self.bc, self.bc) if isinstance(self.bc, str) else tuple(self.bc)
        if len(bc) != 2 or any(b not in ("dirichlet", "neumann") for b in bc):
            raise DomainError("bc must be 'dirichlet', 'neumann' or a pair of them")
        object.__setattr__(self, "bc", bc)
        if self.eps is not None and self.eps < 0:
            raise DomainError("eps must be >= 0")
        if any(e < 0 for e in self.eps_schedule):
            raise DomainError("continuation eps values must be >= 0")
        if not self.domain.bounded and self.truncation is None:
            raise DomainError("unbounded domains need a truncation length")


@dataclass(frozen=True)
class State:
    t: float
    u: np.ndarray
    newton_iterations: int = 0
    residual: float = 0.0
    dt: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite(self.u)):
            raise FloatingPointError("state has non-finite entries")


@dataclass
class Trajectory:
    """States at the requested output times (the first at t = 0)."""

    states: list
    grid: Grid
    m: float
    eps: float
    problem: PMEProblem | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    @property
    def u(self) -> np.ndarray:
        """Cell values stacked as (times, cells)."""
        return np.array([s.u for s in self.states])


class StepError(ArithmeticError):
    """Newton failed even after the allowed number of dt halvings."""

    def __init__(self, message, history=(), partial=None):
        super().__init__(message)
        self.history = list(history)
        self.partial = partial


# -- discretization ---------------------------------------------------------------
def build_grid(problem: PMEProblem, M: int, grading=None) -> Grid:
    """Cell grid for ``problem``; see ``grid.assemble_grid`` for the geometry."""
    grading = grading if grading is not None else problem.grading
    return assemble_grid(
        problem.nu,
        problem.mu,
        problem.domain,
        M,
        bc=problem.bc,
        grading=grading,
        truncation=problem.truncation,
        far_policy=problem.far_policy if not problem.domain.bounded else None,
    )


def initial_state(problem: PMEProblem, grid: Grid) -> State:
    return State(0.0, np.asarray(problem.datum(grid.centers, problem.m), dtype=float).copy())


def default_eps(u0) -> float:
    return 1e-6 * max(1.0, float(np.max(np.abs(u0))) if np.size(u0) else 1.0)


def flux_divergence(grid: Grid, phi):
    """Net inflow into each cell: g_{i+1/2}(phi_{i+1}-phi_i) - g_{i-1/2}(phi_i-phi_{i-1}),
    with a zero ghost value behind Dirichlet faces."""
    out = np.zeros_like(phi)
    flux = grid.g * np.diff(phi)
    out[:-1] += flux
    out[1:] -= flux
    out[0] -= grid.g_left * phi[0]
    out[-1] -= grid.g_right * phi[-1]
    return out


def boundary_outflow(grid: Grid, phi) -> float:
    """Total flux leaving through Dirichlet faces, g_b * phi_b summed."""
    return float(grid.g_left * phi[0] + grid.g_right * phi[-1])


def _scaled_residual(F, masses, dt, scale):
    r = np.max(np.abs(F) / masses) * dt
    if scale == 0.0:
        return 0.0 if r == 0.0 else math.inf
    return r / scale


def step(grid: Grid, problem: PMEProblem, state: State, dt: float, eps: float | None = None) -> State:
    """One implicit Euler step of length dt (halved on Newton failure).

    Solves m_i (u_i - u_i^old)/dt = [flux divergence of Phi_eps(u)]_i by
    damped Newton; the residual is max_i |F_i| dt / m_i relative to
    max(||u_old||_inf, ||u||_inf).  Returns the state at t + dt_used.
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    eps = default_eps(state.u) if eps is None else eps
    history = []
    t, u = state.t, state.u
    remaining = dt
    total_iters, last_res, used = 0, 0.0, 0.0
    halvings = 0
    sub = dt
    while remaining > 0:
        h = min(sub, remaining)
        try:
            u_new, iters, res = _newton(grid, problem.m, eps, u, h, problem.controls)
        except _NewtonFailure as exc:
            history.append(exc.history)
            halvings += 1
            if halvings > problem.controls.max_halvings:
                raise StepError(f"Newton failed at t={t!r} after {halvings - 1} dt halvings", history) from None
            sub = 0.5 * h
            continue
        u = u_new
        t += h
        remaining = dt - (t - state.t)
        if remaining <= 1e-14 * max(1.0, abs(t)):
            remaining = 0.0
        total_iters += iters
        last_res = res
        used = h
    return State(state.t + dt, u, total_iters, last_res, used)


class _NewtonFailure(ArithmeticError):
    def __init__(self, history):
        super().__init__("newton failure")
        self.history = history


def _newton(grid, m, eps, u_old, dt, controls):
    masses = grid.masses
    diag_k, off_k = grid.stiffness_bands()
    scale0 = float(np.max(np.abs(u_old))) if u_old.size else 0.0
    u = u_old.copy()

    def residual(v):
        F = masses * (v - u_old) / dt - flux_divergence(grid, phi_eps(v, m, eps))
        return F, _scaled_residual(F, masses, dt, max(scale0, float(np.max(np.abs(v)))))

    F, res = residual(u)
    history = [res]
    if res < controls.newton_tol:
        return u, 0, res
    ab = np.empty((3, u.size))
    for it in range(1, controls.max_newton + 1):
        dphi = phi_eps_prime(u, m, eps)
        ab[1] = masses / dt + diag_k * dphi
        ab[0, 1:] = off_k * dphi[1:]
        ab[0, 0] = 0.0
        ab[2, :-1] = off_k * dphi[:-1]
        ab[2, -1] = 0.0
        delta = solve_banded((1, 1), ab, F, check_finite=False)
        lam = 1.0
        for _ in range(30):
            trial = u - lam * delta
            F_t, res_t = residual(trial)
            if res_t < res or res_t < controls.newton_tol:
                break
            lam *= 0.5
        else:
            raise _NewtonFailure(history)
        u, F, res = trial, F_t, res_t
        history.append(res)
        if not math.isfinite(res):
            raise _NewtonFailure(history)
        if res < controls.newton_tol:
            return u, it, res
    raise _NewtonFailure(history)


# -- time marching ----------------------------------------------------------------
def _march(grid, problem, u0, times, eps):
    c = problem.controls
    state = State(0.0, u0.copy())
    states = [state]
    dt = c.fixed_dt if c.fixed_dt is not None else c.dt_init
    diag = {"steps": 0, "newton_iterations": 0, "max_residual": 0.0, "dt_min": math.inf, "dt_max": 0.0}
    for t_out in times[1:]:
        while state.t < t_out:
            cap = c.dt_max
            if c.fixed_dt is None and state.t > c.dt_init:
                cap = min(cap, c.dt_rel * state.t)
            h = min(dt, cap)
            gap = t_out - state.t
            if h >= gap * (1 - 1e-12) or gap - h < 1e-3 * h:
                h = gap
            try:
                new = step(grid, problem, state, h, eps)
            except StepError as exc:
                exc.partial = Trajectory(states, grid, problem.m, eps, problem, diag)
                raise
            if h == gap:
                new = replace(new, t=t_out)
            state = new
            diag["steps"] += 1
            diag["newton_iterations"] += new.newton_iterations
            diag["max_residual"] = max(diag["max_residual"], new.residual)
            diag["dt_min"] = min(diag["dt_min"], h)
            diag["dt_max"] = max(diag["dt_max"], h)
            if c.fixed_dt is None:
                lo, hi = c.target_iters
                if new.dt < h:  # halvings happened inside the step
                    dt = new.dt
                elif new.newton_iterations < lo:
                    dt = min(max(dt, h) * c.growth, c.dt_max)
                elif new.newton_iterations > hi:
                    dt = 0.5 * h
        states.append(state)
    return Trajectory(states, grid, problem.m, eps, problem, diag)


def solve(problem: PMEProblem, M: int, times, grid: Grid | None = None) -> Trajectory:
    """March from t = 0 through the output ``times`` (t = 0 is prepended).

    With an ``eps_schedule`` the run is repeated for each listed eps; the
    returned trajectory is the last run and ``diagnostics["continuation"]``
    holds the largest nu-weighted L1 difference between consecutive runs.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or np.any(np.diff(times) <= 0) or times[0] < 0:
        raise DomainError("output times must be nonnegative and strictly increasing")
    if times[0] > 0:
        times = np.concatenate([[0.0], times])
    grid = grid if grid is not None else build_grid(problem, M)
    u0 = initial_state(problem, grid).u
    eps_list = [problem.eps if problem.eps is not None else default_eps(u0)]
    eps_list += [float(e) for e in problem.eps_schedule]
    runs = []
    for eps in eps_list:
        runs.append(_march(grid, problem, u0, times, eps))
    traj = runs[-1]
    if len(runs) > 1:
        cont = []
        for prev, cur in zip(runs[:-1], runs[1:]):
            diff = np.abs(prev.u - cur.u) @ grid.masses
            cont.append({"eps": cur.eps, "previous_eps": prev.eps, "max_l1_difference": float(diff.max())})
        traj.diagnostics["continuation"] = cont
    return traj


# -- scaling ----------------------------------------------------------------------
def scale_exponent(N: int, m: float) -> float:
    """a in u~ = V^(-a) u(V^(1/N) x~, t), a = 2 / (N (m - 1))."""
    return 2.0 / (N * (m - 1.0))


def scale_grid(grid: Grid, V: float, N: int = 1) -> Grid:
    """The grid of the problem rescaled to x~ = V^(-1/N) x: nu-masses scale by
    1/V (the radial measure carries the Jacobian) and conductances by V^(2/N-1)."""
    s = V ** (-1.0 / N)
    gfac = V ** (2.0 / N - 1.0)
    dom = Domain1D(grid.domain.left * s, grid.domain.right * s)
    return replace(
        grid,
        faces=grid.faces * s,
        centers=grid.centers * s,
        masses=grid.masses / V,
        g=grid.g * gfac,
        g_left=grid.g_left * gfac,
        g_right=grid.g_right * gfac,
        domain=dom,
        truncation=None if grid.truncation is None else grid.truncation * s,
        meta={**grid.meta, "scaled_by": V, "scale_dimension": N},
    )


def scale_solution(traj: Trajectory, V: float, N: int = 1, m: float | None = None) -> Trajectory:
    """u~(x~, t) = V^(-2/(N(m-1))) u(V^(1/N) x~, t) on the rescaled grid.

    Norms transform as ||u~||_{q;nu~} = V^(-2/(N(m-1)) - 1/q) ||u||_{q;nu}.
    """
    if not V > 0:
        raise DomainError("V must be positive")
    m = traj.m if m is None else m
    fac = V ** (-scale_exponent(N, m))
    states = [replace(s, u=s.u * fac) for s in traj.states]
    return Trajectory(
        states,
        scale_grid(traj.grid, V, N),
        m,
        traj.eps * fac,
        None,
        {**traj.diagnostics, "scaled_by": V, "scale_dimension": N},
    )


# -- export -----------------------------------------------------------------------
def _fmt(v: float) -> str:
    return repr(float(v))


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Long format: header t,x,u, one row per (output time, cell)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x", "u"])
        for s in traj.states:
            for x, v in zip(traj.grid.centers, s.u):
                w.writerow([_fmt(s.t), _fmt(x), _fmt(v)])


def summary_rows(traj: Trajectory, q: float | None = None):
    from .diagnostics import energy, mean, weighted_norm

    q = traj.m + 1.0 if q is None else q
    rows = []
    for s in traj.states:
        rows.append(
            [
                s.t,
                weighted_norm(s, traj.grid, 1),
                weighted_norm(s, traj.grid, 2),
                weighted_norm(s, traj.grid, q),
                weighted_norm(s, traj.grid, math.inf),
                mean(s, traj.grid),
                energy(s, traj.grid, traj.m),
            ]
        )
    return rows


def write_summary_csv(traj: Trajectory, path, q: float | None = None) -> None:
    """Per-time summary: t,norm1,norm2,normq,normInf,mean,energy (q = m+1 by default)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "norm1", "norm2", "normq", "normInf", "mean", "energy"])
        for row in summary_rows(traj, q):
            w.writerow([_fmt(v) for v in row])
