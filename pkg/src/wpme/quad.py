"""Adaptive quadrature and supremum search on intervals with singular or
infinite endpoints.

Two integration paths are provided:

* ``integrate`` is a plain adaptive Gauss-Kronrod (7/15) integrator for
  general integrands.  Infinite endpoints are mapped by x = c + s/(1-s);
  the initial panels are graded geometrically toward every finite endpoint.
* ``log_panel_integrals`` / ``LogCumulative`` / ``weight_integral`` work with
  log f for nonnegative f.  Each panel is integrated with a per-panel scale
  factor, so integrals of exp(+-1e6 x) style weights stay representable.  The
  part of an integral that lies beyond the outermost scan node is estimated
  from the trend of per-decade contributions, which doubles as a
  finite/infinite certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import Domain1D

# Gauss-Kronrod 7/15 nodes on [-1, 1] (nonnegative half) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
W_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
W_GAUSS = np.zeros(15)
W_GAUSS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-8
DEFAULT_MAX_PANELS = 10_000


class QuadratureEvaluationError(ArithmeticError):
    """The integrand returned NaN or an infinite value at a quadrature node."""


class QuadratureAccuracyError(ArithmeticError):
    """The requested accuracy could not be met; ``best`` holds the estimate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass
class QuadResult:
    value: float
    abs_error_estimate: float
    subdivisions: int
    converged: bool


def _gk15(f, lo, hi):
    """Gauss-Kronrod estimate and QUADPACK-style error on each [lo_i, hi_i]."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    x = c[:, None] + h[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise QuadratureEvaluationError(f"integrand not finite at x = {bad!r}")
    resk = fx @ W_KRONROD
    resg = fx @ W_GAUSS
    mean = 0.5 * resk
    resasc = np.abs(fx - mean[:, None]) @ W_KRONROD
    resabs = np.abs(fx) @ W_KRONROD
    err = np.abs(resk - resg)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(resasc > 0, resasc * np.minimum(1.0, (200 * err / resasc) ** 1.5), err)
    err = np.maximum(scaled, 50 * _EPS * resabs)
    return resk * h, err * np.abs(h)


def _initial_edges(lo, hi, grade_lo, grade_hi, levels=12):
    """Panel edges on [lo, hi], geometrically graded toward the flagged ends."""
    pts = [lo, hi, 0.5 * (lo + hi)]
    w = hi - lo
    for k in range(2, levels + 1):
        if grade_lo:
            pts.append(lo + w * 2.0**-k)
        if grade_hi:
            pts.append(hi - w * 2.0**-k)
    return np.unique(np.array(pts))


def _adaptive(f, edges, tol, max_panels):
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    val, err = _gk15(f, lo, hi)
    n_panels = lo.size
    while True:
        total = val.sum()
        total_err = err.sum()
        target = tol * abs(total)
        if total_err <= target or n_panels >= max_panels:
            break
        # split the panels carrying the largest share of the error
        order = np.argsort(err)[::-1]
        cum = np.cumsum(err[order])
        need = np.searchsorted(cum, total_err - 0.5 * target) + 1
        need = int(min(need, max_panels - n_panels, order.size))
        if need <= 0:
            break
        pick = order[:need]
        mid = 0.5 * (lo[pick] + hi[pick])
        if np.any((mid <= lo[pick]) | (mid >= hi[pick])):
            break  # panels at floating-point resolution
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        nv, ne = _gk15(f, new_lo, new_hi)
        keep = np.ones(lo.size, bool)
        keep[pick] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        n_panels += need
    total = float(val.sum())
    total_err = float(err.sum())
    converged = total_err <= tol * abs(total) or total_err <= 1e-300
    return total, total_err, n_panels, converged


def integrate(f, interval: Domain1D, tol: float = DEFAULT_TOL, max_panels: int = DEFAULT_MAX_PANELS) -> QuadResult:
    """Adaptive integral of a vectorized integrand over an open interval.

    Convergence means the error estimate is below ``tol`` relative to the
    value.  If the panel budget runs out the best estimate is returned with
    ``converged=False``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = interval.left, interval.right
    if interval.bounded:
        edges = _initial_edges(a, b, True, True)
        v, e, n, ok = _adaptive(f, edges, tol, max_panels)
        return QuadResult(v, e, n, ok)
    if math.isfinite(a) or math.isfinite(b):
        c = a if math.isfinite(a) else b
        sign = 1.0 if math.isfinite(a) else -1.0

        def g(s):
            x = c + sign * s / (1.0 - s)
            return f(x) / (1.0 - s) ** 2

        v, e, n, ok = _adaptive(g, _initial_edges(0.0, 1.0, True, True), tol, max_panels)
        return QuadResult(v, e, n, ok)
    # whole line: split at 0
    left = integrate(f, Domain1D(-math.inf, 0.0), tol, max_panels // 2)
    right = integrate(f, Domain1D(0.0, math.inf), tol, max_panels // 2)
    return QuadResult(
        left.value + right.value,
        left.abs_error_estimate + right.abs_error_estimate,
        left.subdivisions + right.subdivisions,
        left.converged and right.converged,
    )


# ---------------------------------------------------------------------------
# log-space integration of nonnegative integrands
# ---------------------------------------------------------------------------
def _log_gk15(logf, lo, hi):
    """log of the Kronrod estimate and log of its error on each panel."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    x = c[:, None] + h[:, None] * NODES[None, :]
    lf = np.asarray(logf(x.ravel()), dtype=float).reshape(x.shape)
    if np.any(np.isnan(lf)):
        bad = x[np.isnan(lf)][0]
        raise QuadratureEvaluationError(f"log-integrand is NaN at x = {bad!r}")
    shift = lf.max(axis=1)
    pos_inf = np.isposinf(shift)
    zero = np.isneginf(shift)
    safe = np.where(pos_inf | zero, 0.0, shift)
    # panels with an infinite maximum produce inf/nan here and are overwritten below
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        fx = np.exp(lf - safe[:, None])
        resk = fx @ W_KRONROD
        resg = fx @ W_GAUSS
        mean = 0.5 * resk
        resasc = np.abs(fx - mean[:, None]) @ W_KRONROD
        err = np.abs(resk - resg)
        err = np.where(resasc > 0, resasc * np.minimum(1.0, (200 * err / resasc) ** 1.5), err)
        err = np.maximum(err, 50 * _EPS * resk)
        logk = safe + np.log(resk * h)
        loge = safe + np.log(err * h)
    logk = np.where(pos_inf, np.inf, np.where(zero, -np.inf, logk))
    loge = np.where(pos_inf, np.inf, np.where(zero, -np.inf, loge))
    return logk, loge


def log_panel_integrals(logf, lo, hi, tol: float = 1e-10, max_rounds: int = 60, max_panels: int = 200_000):
    """log of the integral of exp(logf) over each finite panel [lo_i, hi_i].

    Each panel is refined by bisection until its own relative error is below
    ``tol``.  Returns (log_values, converged_flags).
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    n = lo.size
    if n == 0:
        return np.zeros(0), np.zeros(0, bool)
    owner = np.arange(n)
    a, b = lo.copy(), hi.copy()
    lk, le = _log_gk15(logf, a, b)
    log_tol = math.log(tol)
    for _ in range(max_rounds):
        tot = np.full(n, -np.inf)
        np.logaddexp.at(tot, owner, lk)
        cnt = np.bincount(owner, minlength=n)
        # a sub-panel is split if its error exceeds its share of the budget
        budget = tot[owner] + log_tol - np.log(cnt[owner])
        bad = (le > budget) & np.isfinite(tot[owner])
        if not np.any(bad) or a.size >= max_panels:
            break
        mid = 0.5 * (a[bad] + b[bad])
        ok = (mid > a[bad]) & (mid < b[bad])
        if not np.any(ok):
            break
        idx = np.flatnonzero(bad)[ok]
        mid = mid[ok]
        n_lo = np.concatenate([a[idx], mid])
        n_hi = np.concatenate([mid, b[idx]])
        n_own = np.concatenate([owner[idx], owner[idx]])
        nk, ne = _log_gk15(logf, n_lo, n_hi)
        keep = np.ones(a.size, bool)
        keep[idx] = False
        a = np.concatenate([a[keep], n_lo])
        b = np.concatenate([b[keep], n_hi])
        owner = np.concatenate([owner[keep], n_own])
        lk = np.concatenate([lk[keep], nk])
        le = np.concatenate([le[keep], ne])
    tot = np.full(n, -np.inf)
    np.logaddexp.at(tot, owner, lk)
    terr = np.full(n, -np.inf)
    np.logaddexp.at(terr, owner, le)
    with np.errstate(invalid="ignore"):
        conv = (terr <= tot + log_tol + 1e-12) | np.isneginf(tot) | np.isposinf(tot)
    return tot, conv


# ---------------------------------------------------------------------------
# scan grids and endpoint tails
# ---------------------------------------------------------------------------
FINITE_DECADES = 12
INFINITE_DECADES = 9


@dataclass
class ScanGrid:
    """Sorted scan points plus, for each end, the decade structure toward it.

    ``decade_edges[side]`` lists indices into ``x`` of points sitting exactly
    at successive decades of distance to that end, ordered from the interior
    toward the end ("left"/"right").
    """

    x: np.ndarray
    decade_edges: dict
    interval: Domain1D


def scan_grid(interval: Domain1D, budget: int = 256) -> ScanGrid:
    """Logarithmically spaced points, dense near finite ends, decades to infinity."""
    a, b = interval.left, interval.right
    per_side = max(budget // 2, 16)

    def finite_side(e, scale, direction, decades):
        ppd = max(2, per_side // decades)
        k = np.arange(decades * ppd + 1)
        dist = scale * 10.0 ** (-k / ppd)  # from scale down to scale*10^-decades
        return e + direction * dist, ppd

    def infinite_side(c, scale, direction, decades):
        ppd = max(2, per_side // decades)
        k = np.arange(decades * ppd + 1)
        dist = scale * 10.0 ** (k / ppd)
        return c + direction * dist, ppd

    pieces = []
    meta = {}
    if interval.bounded:
        half = 0.5 * (b - a)
        xl, ppd_l = finite_side(a, half, +1.0, FINITE_DECADES)
        xr, ppd_r = finite_side(b, half, -1.0, FINITE_DECADES)
        pieces += [xl, xr]
        meta["left"] = (xl, ppd_l)
        meta["right"] = (xr, ppd_r)
    elif math.isfinite(a):
        scale = max(1.0, abs(a))
        xl, ppd_l = finite_side(a, scale, +1.0, FINITE_DECADES)
        xr, ppd_r = infinite_side(a, scale, +1.0, INFINITE_DECADES)
        pieces += [xl, xr]
        meta["left"] = (xl, ppd_l)
        meta["right"] = (xr, ppd_r)
    elif math.isfinite(b):
        scale = max(1.0, abs(b))
        xr, ppd_r = finite_side(b, scale, -1.0, FINITE_DECADES)
        xl, ppd_l = infinite_side(b, scale, -1.0, INFINITE_DECADES)
        pieces += [xl, xr]
        meta["left"] = (xl, ppd_l)
        meta["right"] = (xr, ppd_r)
    else:
        xr, ppd = infinite_side(0.0, 1.0, +1.0, INFINITE_DECADES)
        xl, _ = infinite_side(0.0, 1.0, -1.0, INFINITE_DECADES)
        inner = np.linspace(-1.0, 1.0, 2 * ppd + 1)
        pieces += [xl, xr, inner]
        meta["left"] = (xl, ppd)
        meta["right"] = (xr, ppd)
    x = np.unique(np.concatenate(pieces))
    x = x[(x > a) & (x < b)]
    edges = {}
    for side, (pts, ppd) in meta.items():
        # points at whole decades, ordered toward the end
        dec = pts[::ppd]
        if side == "left":
            dec = np.sort(dec)[::-1]
        else:
            dec = np.sort(dec)
        edges[side] = np.searchsorted(x, dec)
        edges[side] = edges[side][(edges[side] < x.size)]
        edges[side] = edges[side][np.isclose(x[edges[side]], dec[: edges[side].size], rtol=0, atol=0)]
    return ScanGrid(x, edges, interval)


@dataclass
class TailEstimate:
    """Integral beyond the outermost scan node, from per-decade contributions."""

    log_value: float
    status: str  # "finite", "infinite" or "inconclusive"
    log_decades: np.ndarray = field(default_factory=lambda: np.zeros(0))
    ratio: float = float("nan")


# Thresholds on the ratio of successive per-decade contributions.
_RATIO_CONVERGE = 0.9
_RATIO_FLAT = 0.995
# For contributions ~ ell^(-p), ell = |log distance| (logarithmic weights).
_POWER_CONVERGE = 1.3
_POWER_DIVERGE = 0.7
_GROWTH_CERTIFICATE = 1e12
_LN10 = math.log(10.0)
_LOG_MAX = math.log(np.finfo(float).max)


def _fit(u, v):
    coef = np.polyfit(u, v, 1)
    res = v - np.polyval(coef, u)
    return float(coef[0]), float(np.sqrt(np.mean(res**2)))


def tail_from_decades(
    log_dec: np.ndarray,
    ell: np.ndarray | None = None,
    log_panels: np.ndarray | None = None,
    log_local: float | None = None,
) -> TailEstimate:
    """Classify and extrapolate the remainder of a series of per-decade integrals.

    ``log_dec`` holds the log of the integral over successive decades of
    distance toward an endpoint, ``ell`` the matching |log distance|.  Two
    models are fitted to the last six decades: geometric decay (power-law
    weights) and decay like ell^(-p) (logarithmic weights); the better fit
    decides.  Any infinite decade, or growth above 1e12 relative to the first
    decade with the last decade still within 10x of the largest, certifies
    divergence outright.  For geometric decay the value of
    the remainder is extrapolated from ``log_panels`` (the last few panels,
    ordered toward the end) when given, which stays accurate for
    faster-than-geometric decay, or from ``log_local`` (a local asymptotic
    estimate) when that is available.
    """
    log_dec = np.asarray(log_dec, dtype=float)
    if log_dec.size == 0:
        return TailEstimate(-math.inf, "finite", log_dec)
    if np.any(np.isposinf(log_dec)):
        return TailEstimate(math.inf, "infinite", log_dec)
    last = log_dec[-6:]
    if np.any(np.isneginf(last)):
        # exact zeros near the end: whatever is left is negligible
        return TailEstimate(-math.inf, "finite", log_dec, 0.0)
    # huge growth certifies divergence only while the outermost decade is still near the peak
    if (
        np.isfinite(log_dec[0])
        and np.logaddexp.reduce(log_dec) - log_dec[0] > math.log(_GROWTH_CERTIFICATE)
        and log_dec[-1] >= np.max(log_dec) - _LN10
    ):
        return TailEstimate(math.inf, "infinite", log_dec)
    if last.size < 3:
        return TailEstimate(float(last[-1]), "inconclusive", log_dec)
    k = np.arange(last.size, dtype=float)
    log_r, res_geo = _fit(k, last)
    use_power = False
    if ell is not None:
        el = np.asarray(ell, dtype=float)[-6:]
        if np.all(el > 1.0):
            slope, res_pow = _fit(np.log(el), last)
            use_power = res_pow < res_geo
    if use_power:
        p = -slope
        if p > _POWER_CONVERGE:
            lk = el[-1]
            c = last[-1] + p * math.log(lk) - math.log(_LN10)
            tail = c + (1 - p) * math.log(lk + 0.5 * _LN10) - math.log(p - 1)
            return TailEstimate(float(tail), "finite", log_dec, math.exp(log_r))
        if p < _POWER_DIVERGE:
            return TailEstimate(math.inf, "infinite", log_dec, math.exp(log_r))
        return TailEstimate(float(last[-1]), "inconclusive", log_dec, math.exp(log_r))
    r = math.exp(min(log_r, 50.0))
    if r < _RATIO_CONVERGE:
        tail = last[-1] + log_r - math.log1p(-r)
        if log_panels is not None and len(log_panels) >= 2 and np.all(np.isfinite(log_panels)):
            lp_r = float(np.mean(np.diff(log_panels)))
            if lp_r < 0:
                tail = min(tail, log_panels[-1] + lp_r - math.log(-math.expm1(lp_r)))
        if log_local is not None and math.isfinite(log_local) and log_local < tail - 0.01:
            # the panel extrapolation overestimates faster-than-geometric decay
            tail = log_local
        return TailEstimate(float(tail), "finite", log_dec, r)
    if r >= _RATIO_FLAT:
        return TailEstimate(math.inf, "infinite", log_dec, r)
    return TailEstimate(float(last[-1]), "inconclusive", log_dec, r)


class LogCumulative:
    """Cumulative integrals of exp(logf) anchored at both interval ends.

    ``left(x)`` is log of the integral from the left end to x and ``right(x)``
    from x to the right end, for any x within the scan range.  The parts
    beyond the outermost scan nodes come from ``tail_from_decades``; their
    statuses are kept in ``left_tail`` and ``right_tail``.
    """

    def __init__(self, logf, grid: ScanGrid, tol: float = 1e-10):
        self.logf = logf
        self.grid = grid
        self.tol = tol
        x = grid.x
        self.x = x
        self.log_panels, conv = log_panel_integrals(logf, x[:-1], x[1:], tol=tol)
        self.all_converged = bool(np.all(conv))
        self.left_tail = self._tail("left")
        self.right_tail = self._tail("right")
        lp = np.concatenate([[self.left_tail.log_value], self.log_panels])
        self.cum_left = np.logaddexp.accumulate(lp)  # cum_left[k] = log int_a^{x_k}
        rp = np.concatenate([[self.right_tail.log_value], self.log_panels[::-1]])
        self.cum_right = np.logaddexp.accumulate(rp)[::-1]  # log int_{x_k}^b

    def _tail(self, side):
        idx = self.grid.decade_edges.get(side, np.zeros(0, int))
        if idx.size < 2:
            return TailEstimate(-math.inf, "finite")
        lo = np.minimum(idx[:-1], idx[1:])
        hi = np.maximum(idx[:-1], idx[1:])
        dec = np.array([np.logaddexp.reduce(self.log_panels[l:h]) if h > l else -math.inf for l, h in zip(lo, hi)])
        end = self.grid.interval.left if side == "left" else self.grid.interval.right
        xd = self.x[idx]
        dist = np.abs(xd - end) if math.isfinite(end) else np.abs(xd)
        with np.errstate(divide="ignore"):
            ell = np.abs(np.log(np.sqrt(dist[:-1] * dist[1:])))
        near = self.log_panels[:4][::-1] if side == "left" else self.log_panels[-4:]
        return tail_from_decades(dec, ell, near, self._local_tail(side))

    def _local_tail(self, side):
        """log of the integral beyond the outermost node from integration by parts.

        With phi = logf, int_x^b e^phi = -e^phi / (phi' (1 - kappa)) where
        kappa = phi'' / phi'^2 is taken as locally constant; this is exact
        for powers of the distance and for exponentials.
        """
        end = self.grid.interval.right if side == "right" else self.grid.interval.left
        if math.isfinite(end):
            return None  # the boundary term at a finite end does not vanish in general
        x = self.x
        x0, x1 = (x[-1], x[-2]) if side == "right" else (x[0], x[1])
        h = 0.01 * abs(x0 - x1)
        with np.errstate(all="ignore"):
            p0, p1, p2 = np.asarray(self.logf(np.array([x0 - h, x0, x0 + h])), dtype=float)
            d1 = (p2 - p0) / (2 * h)
            d2 = (p2 - 2 * p1 + p0) / (h * h)
            if not (np.isfinite(p1) and np.isfinite(d1) and np.isfinite(d2)) or d1 == 0:
                return None
            kappa = d2 / (d1 * d1)
            val = (-1.0 if side == "right" else 1.0) / (d1 * (1.0 - kappa))
        if not (math.isfinite(val) and val > 0):
            return None
        return float(p1 + math.log(val))

    @property
    def total(self) -> float:
        return float(np.logaddexp(self.cum_left[-1], self.right_tail.log_value))

    @property
    def status(self) -> str:
        sts = {self.left_tail.status, self.right_tail.status}
        if "infinite" in sts:
            return "infinite"
        if "inconclusive" in sts:
            return "inconclusive"
        return "finite"

    def _partial(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k = np.clip(np.searchsorted(self.x, x, side="right") - 1, 0, self.x.size - 2)
        lo = self.x[k]
        hi = self.x[k + 1]
        xc = np.clip(x, lo, hi)
        left_part = np.full(x.shape, -np.inf)
        right_part = np.full(x.shape, -np.inf)
        m1 = xc > lo
        m2 = xc < hi
        if np.any(m1):
            left_part[m1] = log_panel_integrals(self.logf, lo[m1], xc[m1], tol=self.tol)[0]
        if np.any(m2):
            right_part[m2] = log_panel_integrals(self.logf, xc[m2], hi[m2], tol=self.tol)[0]
        return k, left_part, right_part

    def left(self, x):
        """log of the integral from the left end to x."""
        k, lp, _ = self._partial(x)
        return np.logaddexp(self.cum_left[k], lp)

    def right(self, x):
        """log of the integral from x to the right end."""
        k, _, rp = self._partial(x)
        return np.logaddexp(self.cum_right[k + 1], rp)


@dataclass
class WeightIntegral:
    value: float
    log_value: float
    status: str
    left_tail: TailEstimate
    right_tail: TailEstimate


def weight_integral(logf, interval: Domain1D, tol: float = DEFAULT_TOL, budget: int = 512) -> WeightIntegral:
    """Integral of a nonnegative function given by its log, with a
    finite/infinite certificate at both ends.

    Raises QuadratureAccuracyError when finiteness cannot be decided.
    """
    grid = scan_grid(interval, budget)
    cum = LogCumulative(logf, grid, tol=min(tol, 1e-10))
    st = cum.status
    if st == "inconclusive":
        raise QuadratureAccuracyError(
            f"cannot decide finiteness of the integral over {interval}", best=math.exp(min(cum.total, 700))
        )
    if st == "infinite":
        return WeightIntegral(math.inf, math.inf, st, cum.left_tail, cum.right_tail)
    # finite integrals beyond float range keep their exact log_value
    value = math.exp(cum.total) if cum.total < _LOG_MAX else math.inf
    return WeightIntegral(value, cum.total, st, cum.left_tail, cum.right_tail)


# ---------------------------------------------------------------------------
# supremum search
# ---------------------------------------------------------------------------
@dataclass
class SupResult:
    sup: float
    argmax: float
    bounded: bool
    x: np.ndarray = field(repr=False, default=None)
    values: np.ndarray = field(repr=False, default=None)
    log_values: bool = False


_GOLD = 0.5 * (math.sqrt(5.0) - 1.0)


def _golden(g, lo, hi, iters=60):
    c = hi - _GOLD * (hi - lo)
    d = lo + _GOLD * (hi - lo)
    fc, fd = g(c), g(d)
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    for _ in range(iters):
        if not hi - lo > 4 * _EPS * max(abs(lo), abs(hi), 1e-300):
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLD * (hi - lo)
            fc = g(c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLD * (hi - lo)
            fd = g(d)
            if fd > best_f:
                best_x, best_f = d, fd
    return best_x, best_f


# relative slack on the x10 growth threshold so exact 1/x growth is caught
_GROWTH_SLACK = 1e-6


def frontier_growth(values: np.ndarray, grid: ScanGrid, side: str, log_values: bool) -> bool:
    """True if g increases monotonically by >= 10x over the outermost decade toward ``side``."""
    idx = grid.decade_edges.get(side)
    if idx is None or idx.size < 2:
        return False
    i0, i1 = idx[-2], idx[-1]
    step = 1 if i1 > i0 else -1
    seg = values[np.arange(i0, i1 + step, step)]
    seg = seg[~np.isnan(seg)]
    if seg.size < 2:
        return False
    if np.isposinf(seg[-1]):
        return True
    if log_values:
        mono = np.all(np.diff(seg) >= -1e-9 * np.maximum(1.0, np.abs(seg[1:])))
        return bool(mono and seg[-1] - seg[0] >= math.log(10.0) - _GROWTH_SLACK)
    mono = np.all(np.diff(seg) >= -1e-9 * np.abs(seg[1:]))
    return bool(mono and seg[0] > 0 and seg[-1] >= 10.0 * seg[0] * (1 - _GROWTH_SLACK))


def sup_search(g, interval: Domain1D, budget: int = 256, log_values: bool = False, grid: ScanGrid | None = None) -> SupResult:
    """Supremum of g over the open interval.

    g must accept an array of points.  With ``log_values=True`` g returns
    log of the function and the growth test works on logs; ``sup`` is still
    reported on the original scale.  The bounded verdict is false when g
    still grows at the scan frontier.
    """
    if budget < 64:
        raise ValueError("sup_search needs budget >= 64")
    grid = grid or scan_grid(interval, budget)
    x = grid.x
    vals = np.asarray(g(x), dtype=float)
    if np.all(np.isnan(vals)):
        raise QuadratureEvaluationError("g is NaN on the whole scan grid")
    unbounded = any(frontier_growth(vals, grid, side, log_values) for side in ("left", "right"))
    if np.any(np.isposinf(vals)):
        unbounded = True
    work = np.where(np.isnan(vals), -np.inf, vals)
    i = int(np.argmax(work))
    best_x, best_f = float(x[i]), float(work[i])
    if np.isfinite(best_f):
        lo = x[max(i - 1, 0)]
        hi = x[min(i + 1, x.size - 1)]

        def g1(t):
            v = float(np.asarray(g(np.array([t])), dtype=float)[0])
            return -math.inf if math.isnan(v) else v

        if hi > lo:
            rx, rf = _golden(g1, lo, hi)
            if rf > best_f:
                best_x, best_f = rx, rf
    sup = best_f
    if log_values:
        sup = math.exp(best_f) if best_f < 709 else math.inf
    if unbounded:
        sup = math.inf
    return SupResult(sup, best_x, not unbounded, x, vals, log_values)
