"""Weighted norms, energies, rate fits and bound checkers for trajectories."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .domain import DomainError


class FitError(ValueError):
    """Too few samples (or non-positive values) inside the fit window."""


class MissingNormError(ValueError):
    """A bound needs data the trajectory or the parameters do not provide."""


# -- norms and energies -----------------------------------------------------------
def _values(state):
    return np.asarray(getattr(state, "u", state), dtype=float)


def weighted_norm(state, grid, q) -> float:
    """(sum m_i |u_i|^q)^(1/q); the grid maximum of |u_i| for q = inf."""
    u = np.abs(_values(state))
    if q == math.inf:
        return float(u.max()) if u.size else 0.0
    if q < 1:
        raise DomainError("norm exponent must be >= 1")
    top = u.max() if u.size else 0.0
    if top == 0.0:
        return 0.0
    # factor out the maximum so high powers cannot overflow
    return float(top * (grid.masses @ (u / top) ** q) ** (1.0 / q))


def mean(state, grid) -> float:
    """nu-weighted mean sum m_i u_i / sum m_i."""
    return float(grid.masses @ _values(state) / grid.masses.sum())


def signed_power(u, p):
    return np.sign(u) * np.abs(u) ** p


def _face_energy(grid, w) -> float:
    e = float(grid.g @ np.diff(w) ** 2)
    return e + grid.g_left * w[0] ** 2 + grid.g_right * w[-1] ** 2


def energy(state, grid, m: float) -> float:
    """Discrete ||(u^m)_x||^2_{2;mu}: sum over faces of g (jump of u^m)^2,
    Dirichlet faces jumping to the zero ghost value."""
    return _face_energy(grid, signed_power(_values(state), m))


def energy_q(traj, q: float) -> np.ndarray:
    """Series of discrete ||(u^((m+q)/2))_x||^2_{2;mu} at the output times."""
    p = 0.5 * (traj.m + q)
    return np.array([_face_energy(traj.grid, signed_power(s.u, p)) for s in traj.states])


def dissipation_constant(q: float, m: float) -> float:
    """4 q (q+1) m / (m+q)^2, the weight of the energy in the L^(q+1) balance."""
    return 4.0 * q * (q + 1.0) * m / (m + q) ** 2


def energy_identity_check(traj, q: float) -> np.ndarray:
    """c_q int_0^t E_q + ||u(t)||_{q+1}^{q+1} - ||u0||_{q+1}^{q+1} at each output
    time, with the energy integral by the trapezoidal rule over output times."""
    if q < 0:
        raise DomainError("q must be >= 0")
    E = energy_q(traj, q)
    t = traj.times
    integral = np.concatenate([[0.0], np.cumsum(0.5 * (E[1:] + E[:-1]) * np.diff(t))])
    p = q + 1.0
    norms = np.array([traj.grid.masses @ np.abs(s.u) ** p for s in traj.states])
    return dissipation_constant(q, traj.m) * integral + norms - norms[0]


def interior_compact_mask(grid, fraction: float = 0.6) -> np.ndarray:
    """Cells of the central ``fraction`` of the domain by nu-measure."""
    cum = np.cumsum(grid.masses)
    total = cum[-1]
    lo, hi = 0.5 * (1 - fraction) * total, 0.5 * (1 + fraction) * total
    mid = cum - 0.5 * grid.masses
    return (mid >= lo) & (mid <= hi)


def norm_series(traj, q, centered: bool = False, mask=None) -> np.ndarray:
    """||u(t)||_{q;nu} (or ||u(t) - mean||) at every output time."""
    g = traj.grid
    ubar = mean(traj.states[0], g) if centered else 0.0
    out = []
    for s in traj.states:
        v = s.u - ubar
        if mask is not None:
            out.append(float(np.max(np.abs(v[mask]))) if q == math.inf else math.nan)
        else:
            out.append(weighted_norm(v, g, q))
    return np.array(out)


# -- rate fitting -----------------------------------------------------------------
@dataclass(frozen=True)
class RateFit:
    exponent: float
    constant: float
    window: tuple
    residual: float
    samples: int

    def to_dict(self) -> dict:
        return asdict(self)


def _window(t, y, window, min_samples=8):
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if window is None:
        window = (t[-1] / 100.0, t[-1] / 2.0)
    lo, hi = window
    sel = (t >= lo * (1 - 1e-12)) & (t <= hi * (1 + 1e-12))
    if sel.sum() < min_samples:
        raise FitError(f"only {int(sel.sum())} samples in window [{lo}, {hi}]; need {min_samples}")
    if np.any(y[sel] <= 0):
        raise FitError("values must be positive inside the fit window")
    return t[sel], y[sel], (float(lo), float(hi))


def fit_power_decay(t, y, window=None) -> RateFit:
    """Least squares of log y on log t: y ~ constant * t^exponent.

    The default window is [t_end/100, t_end/2]; it must hold >= 8 samples.
    ``residual`` is the RMS misfit in log y.
    """
    ts, ys, win = _window(t, y, window)
    if ts[0] <= 0:
        raise FitError("power fits need t > 0")
    A = np.column_stack([np.log(ts), np.ones_like(ts)])
    coef, *_ = np.linalg.lstsq(A, np.log(ys), rcond=None)
    res = np.log(ys) - A @ coef
    return RateFit(float(coef[0]), float(math.exp(coef[1])), win, float(np.sqrt(np.mean(res**2))), int(ts.size))


def fit_exponential_decay(t, y, window=None) -> RateFit:
    """Least squares of log y on t: y ~ constant * exp(-exponent * t).

    ``exponent`` is the decay rate (positive for decay).
    """
    ts, ys, win = _window(t, y, window)
    A = np.column_stack([ts, np.ones_like(ts)])
    coef, *_ = np.linalg.lstsq(A, np.log(ys), rcond=None)
    res = np.log(ys) - A @ coef
    return RateFit(float(-coef[0]), float(math.exp(coef[1])), win, float(np.sqrt(np.mean(res**2))), int(ts.size))


# -- bound checks -----------------------------------------------------------------
BOUND_TAGS = (
    "dirichlet_smoothing",
    "dirichlet_absolute",
    "neumann_smoothing_exp",
    "neumann_smoothing",
    "zero_mean_absolute",
    "zero_mean_smoothing",
    "mean_intermediate",
    "mean_absolute",
    "mean_exponential",
    "local_uniform",
)


@dataclass
class BoundReport:
    """Smallest constant(s) making a bound's functional form dominate the
    measured norm at every sampled time, and the per-time log margins
    log(RHS / LHS) under those constants (+inf where LHS = 0)."""

    bound: str
    constant: float
    times: np.ndarray
    margins: np.ndarray
    extra: dict = field(default_factory=dict)
    verdict: str = "holds"

    def to_dict(self) -> dict:
        def f(v):
            v = float(v)
            return v if math.isfinite(v) else ("inf" if v > 0 else ("-inf" if v < 0 else "nan"))

        return {
            "bound": self.bound,
            "constant": f(self.constant),
            "times": [f(v) for v in self.times],
            "margins": [f(v) for v in self.margins],
            "extra": {k: (f(v) if isinstance(v, float) else v) for k, v in self.extra.items()},
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class NormLaw:
    """Undo a spatial rescaling before fitting: measured q-norms are divided
    by V^(-a - 1/q) and means by V^(-a), a = 2/(N(m-1))."""

    V: float
    N: int
    m: float

    @property
    def a(self) -> float:
        return 2.0 / (self.N * (self.m - 1.0))

    def norm_factor(self, q) -> float:
        inv_q = 0.0 if q == math.inf else 1.0 / q
        return self.V ** (-self.a - inv_q)

    def value_factor(self) -> float:
        return self.V ** (-self.a)


def _ratio_max(lhs, rhs):
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(lhs == 0, 0.0, lhs / rhs)
    if np.any(~np.isfinite(r)):
        raise MissingNormError("bound form vanishes where the norm does not")
    return float(r.max()) if r.size else 0.0


def _margins(lhs, rhs):
    with np.errstate(divide="ignore"):
        return np.where(lhs == 0, np.inf, np.log(rhs) - np.log(np.where(lhs == 0, 1.0, lhs)))


def _exp_envelope(log_r, s):
    """Minimize log K + H s_end over H >= 0 with log r_i <= log K + H s_i.

    The optimum H is 0 or a slope between two samples; all are tried.
    """
    cands = {0.0}
    n = log_r.size
    for i in range(n):
        ds = s[i + 1 :] - s[i]
        ok = ds > 0
        slopes = (log_r[i + 1 :][ok] - log_r[i]) / ds[ok]
        cands.update(float(v) for v in slopes[slopes > 0])
    best = None
    for H in sorted(cands):
        logK = float(np.max(log_r - H * s))
        obj = logK + H * s[-1]
        if best is None or obj < best[0] - 1e-15:
            best = (obj, logK, H)
    return best[1], best[2]


def check_bound(traj, bound: str, params: dict | None = None, norm_law: NormLaw | None = None, t_min: float = 0.0) -> BoundReport:
    """Fit the constant of one decay bound to a trajectory.

    ``params`` may set q0 (datum norm exponent, default 1), rho (measured norm
    exponent, default 2), epsilon (for "mean_intermediate", default 0.5) and
    R (for the exponential bounds, only recorded).  Only samples with t > 0
    and t >= t_min are used ("mean_intermediate" also requires t > 1).
    """
    if bound not in BOUND_TAGS:
        raise DomainError(f"unknown bound tag {bound!r}; choose from {BOUND_TAGS}")
    params = dict(params or {})
    m = traj.m
    q0 = float(params.get("q0", 1.0))
    rho = params.get("rho", 2.0)
    rho = math.inf if rho in ("inf", math.inf) else float(rho)
    g = traj.grid
    t_all = traj.times
    sel = (t_all > 0) & (t_all >= t_min)
    if bound == "mean_intermediate":
        sel &= t_all > 1
    if sel.sum() < 8:
        raise MissingNormError(f"bound {bound!r} needs >= 8 sampled times, got {int(sel.sum())}")
    t = t_all[sel]

    def nfac(q):
        return norm_law.norm_factor(q) if norm_law else 1.0

    u0 = traj.states[0].u
    ubar = mean(u0, g) / (norm_law.value_factor() if norm_law else 1.0)
    n0 = weighted_norm(u0, g, q0) / nfac(q0)
    centered = bound.startswith("mean_") or bound == "local_uniform"
    if bound == "local_uniform":
        mask = interior_compact_mask(g)
        lhs = norm_series(traj, math.inf, centered=True, mask=mask)[sel] / (norm_law.value_factor() if norm_law else 1.0)
    else:
        lhs = norm_series(traj, rho, centered=centered)[sel] / nfac(rho)
    inv_rho = 0.0 if rho == math.inf else 1.0 / rho
    smooth_exp = (1.0 - q0 * inv_rho) / (m - 1.0)  # (rho - q0) / (rho (m - 1))
    extra = {"q0": q0, "rho": rho if math.isfinite(rho) else "inf"}

    if bound in ("dirichlet_smoothing", "zero_mean_smoothing"):
        form = t ** (-smooth_exp) * n0 ** (q0 * inv_rho)
    elif bound in ("dirichlet_absolute", "zero_mean_absolute", "mean_absolute"):
        form = t ** (-1.0 / (m - 1.0))
    elif bound == "neumann_smoothing":
        form = t ** (-smooth_exp) * n0 ** (q0 * inv_rho) + n0
    elif bound == "mean_intermediate":
        e = float(params.get("epsilon", 0.5))
        form = t ** (-2.0 * (1.0 - e) * inv_rho / (m - 1.0)) * n0 ** (q0 * e * inv_rho)
        extra["epsilon"] = e
    elif bound == "neumann_smoothing_exp":
        base = t ** (-smooth_exp) * n0 ** (q0 * inv_rho)
        s = n0 ** (m - 1.0) * t
        if np.all(lhs == 0):
            return BoundReport(bound, 0.0, t, _margins(lhs, base), {**extra, "H": 0.0})
        with np.errstate(divide="ignore"):
            log_r = np.log(lhs) - np.log(base)
        keep = np.isfinite(log_r)
        logK, H = _exp_envelope(log_r[keep], s[keep])
        rhs = math.exp(logK) * base * np.exp(H * s)
        return BoundReport(bound, math.exp(logK), t, _margins(lhs, rhs), {**extra, "H": H})
    elif bound == "mean_exponential":
        d0 = weighted_norm(u0 - mean(u0, g), g, rho) / nfac(rho)
        scale = abs(ubar) ** (m - 1.0)
        extra["R"] = float(np.max(np.abs(u0 - mean(u0, g))) / (norm_law.value_factor() if norm_law else 1.0) / abs(ubar)) if ubar else math.inf
        if d0 == 0 or np.all(lhs == 0):
            return BoundReport(bound, math.inf, t, np.full(t.shape, np.inf), extra)
        if scale == 0:
            raise MissingNormError("exponential bound needs a nonzero mean")
        with np.errstate(divide="ignore"):
            rates = -np.log(lhs / d0) / (scale * t)
        C = float(np.min(rates))
        rhs = d0 * np.exp(-C * scale * t)
        return BoundReport(bound, C, t, _margins(lhs, rhs), extra)
    else:  # local_uniform
        scale = abs(ubar) ** (m - 1.0)
        if np.all(lhs == 0):
            return BoundReport(bound, 0.0, t, np.full(t.shape, np.inf), {**extra, "C": math.inf})
        if scale == 0:
            raise MissingNormError("local uniform bound needs a nonzero mean")
        fit = fit_exponential_decay(t, lhs, window=(t[0], t[-1]))
        C = max(fit.exponent, 0.0) / scale
        form = np.exp(-C * scale * t)
        G = _ratio_max(lhs, form)
        return BoundReport(bound, G, t, _margins(lhs, G * form), {**extra, "C": C})

    K = _ratio_max(lhs, form)
    return BoundReport(bound, K, t, _margins(lhs, K * form), extra)
