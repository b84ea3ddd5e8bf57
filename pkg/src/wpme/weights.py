"""Weight families rho(x) > 0 on 1D intervals and admissibility checks.

Every family is evaluated in closed form, both directly (``value``) and as a
logarithm (``log_value``).  The logarithmic form is what the Hardy-type
functionals use, so exponentially growing or decaying weights never overflow.

A weight may carry a radial dimension ``N``: the 1D weight is then multiplied
by |x|^(N-1), which is the reduction of a radial weight on R^N to the radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import PchipInterpolator

from .domain import Domain1D, DomainError, distance_to_ends

FAMILIES = ("power", "logpower", "exp", "gaussian", "distance", "bracket", "profile", "table")
PROFILES = ("identity", "exp", "sinh", "bridge", "table")


@dataclass(frozen=True)
class WeightSpec:
    """A closed-form weight.

    Families and their parameters:

    power     |x|^beta (pivot "origin") or (x - left)^beta (pivot "left")
    logpower  |x|^power * |log|x||^beta
    exp       exp(alpha * x) or exp(alpha * |x|) (argument "abs")
    gaussian  exp(-d x^2), d > 0
    distance  delta(x)^beta, delta = distance to the nearest finite endpoint
    bracket   (1 + x^2)^beta
    profile   psi(|x|)^(dimension - 1) for a model-manifold profile psi
    table     monotone-cubic interpolation of sampled values (table_x, table_y)

    ``factor`` multiplies the weight; ``dimension`` N > 1 multiplies it by
    |x|^(N-1) (except for ``profile``, where N enters through psi).
    """

    family: str
    beta: float = 0.0
    pivot: str = "origin"
    power: float = 0.0
    alpha: float = 0.0
    argument: str = "x"
    d: float = 1.0
    profile: str = "identity"
    rate: float = 1.0
    table_x: tuple = ()
    table_y: tuple = ()
    dimension: int = 1
    factor: float = 1.0
    domain: Domain1D | None = None
    _interp: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown weight family {self.family!r}")
        if self.family == "gaussian" and not self.d > 0:
            raise DomainError("gaussian weight needs d > 0")
        if self.family == "power" and self.pivot not in ("origin", "left"):
            raise DomainError("pivot must be 'origin' or 'left'")
        if self.family == "power" and self.pivot == "left":
            if self.domain is None or not self.domain.left_finite:
                raise DomainError("pivot 'left' needs a domain with a finite left end")
        if self.family == "exp" and self.argument not in ("x", "abs"):
            raise DomainError("argument must be 'x' or 'abs'")
        if self.family == "profile" and self.profile not in PROFILES:
            raise DomainError(f"unknown profile {self.profile!r}")
        if self.family == "profile" and self.dimension < 2:
            raise DomainError("model-manifold profiles need dimension >= 2")
        if self.dimension < 1:
            raise DomainError("dimension must be >= 1")
        if not self.factor > 0:
            raise DomainError("factor must be positive")
        if self.family == "table" or (self.family == "profile" and self.profile == "table"):
            tx = np.asarray(self.table_x, dtype=float)
            ty = np.asarray(self.table_y, dtype=float)
            if tx.ndim != 1 or tx.shape != ty.shape or tx.size < 2 or np.any(np.diff(tx) <= 0):
                raise DomainError("table needs increasing table_x and matching table_y")
            if np.any(ty < 0):
                raise DomainError("table values must be nonnegative")
            object.__setattr__(self, "table_x", tuple(tx.tolist()))
            object.__setattr__(self, "table_y", tuple(ty.tolist()))
            object.__setattr__(self, "_interp", PchipInterpolator(tx, ty, extrapolate=False))

    # -- evaluation -----------------------------------------------------
    def log_value(self, x):
        """log rho(x), vectorized, without domain checks (-inf where rho = 0)."""
        x = np.asarray(x, dtype=float)
        f = self.family
        with np.errstate(divide="ignore", invalid="ignore"):
            if f == "power":
                base = np.abs(x) if self.pivot == "origin" else x - self.domain.left
                out = np.zeros_like(x) if self.beta == 0 else self.beta * np.log(base)
            elif f == "logpower":
                ax = np.abs(x)
                out = _xlog(self.power, ax) + _xlog(self.beta, np.abs(np.log(ax)))
            elif f == "exp":
                arg = x if self.argument == "x" else np.abs(x)
                out = self.alpha * arg
            elif f == "gaussian":
                out = -self.d * x * x
            elif f == "distance":
                out = _xlog(self.beta, distance_to_ends(x, self._dom()))
            elif f == "bracket":
                out = self.beta * np.log1p(x * x)
            elif f == "profile":
                out = (self.dimension - 1) * self._log_psi(np.abs(x))
            else:
                out = np.log(self._table(x))
            if self.dimension > 1 and f != "profile":
                out = out + (self.dimension - 1) * np.log(np.abs(x))
            if self.factor != 1.0:
                out = out + math.log(self.factor)
        return out

    def value(self, x):
        """rho(x), vectorized, without domain checks."""
        x = np.asarray(x, dtype=float)
        f = self.family
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if f == "power":
                base = np.abs(x) if self.pivot == "origin" else x - self.domain.left
                out = np.ones_like(x) if self.beta == 0 else np.power(base, self.beta)
            elif f == "logpower":
                ax = np.abs(x)
                out = _pow(ax, self.power) * _pow(np.abs(np.log(ax)), self.beta)
            elif f == "exp":
                arg = x if self.argument == "x" else np.abs(x)
                out = np.exp(self.alpha * arg)
            elif f == "gaussian":
                out = np.exp(-self.d * x * x)
            elif f == "distance":
                out = _pow(distance_to_ends(x, self._dom()), self.beta)
            elif f == "bracket":
                out = np.power(1.0 + x * x, self.beta)
            elif f == "profile":
                out = np.exp((self.dimension - 1) * self._log_psi(np.abs(x)))
            else:
                out = self._table(x)
            if self.dimension > 1 and f != "profile":
                out = out * np.abs(x) ** (self.dimension - 1)
            if self.factor != 1.0:
                out = out * self.factor
        return out

    def __call__(self, x):
        return eval_weight(self, x)

    def _dom(self) -> Domain1D:
        if self.domain is None:
            raise DomainError("distance weight needs a domain")
        return self.domain

    def _table(self, x):
        y = self._interp(x)
        return np.where(np.isnan(y), np.nan, np.maximum(y, 0.0))

    def _log_psi(self, r):
        a = self.rate
        if self.profile == "identity":
            return np.log(r)
        if self.profile == "exp":
            return a * r
        if self.profile == "sinh":
            # log(sinh(a r) / a) without overflow
            return a * r + np.log1p(-np.exp(-2 * a * r)) - math.log(2 * a)
        if self.profile == "bridge":
            return _bridge_log_psi(r, a)
        return np.log(self._table(r))

    # -- convenience ----------------------------------------------------
    def on(self, domain: Domain1D) -> "WeightSpec":
        """The same weight attached to another domain."""
        return replace(self, domain=domain)

    def to_dict(self) -> dict:
        d = {"family": self.family}
        defaults = WeightSpec.__dataclass_fields__
        for key in _JSON_KEYS[self.family]:
            val = getattr(self, key)
            if isinstance(val, tuple):
                val = list(val)
            if key in ("factor", "dimension") and val == defaults[key].default:
                continue
            d[key] = val
        return d

    @classmethod
    def from_dict(cls, d: dict, domain: Domain1D | None = None) -> "WeightSpec":
        d = dict(d)
        family = d.pop("family")
        allowed = set(_JSON_KEYS.get(family, ()))
        unknown = set(d) - allowed
        if unknown:
            raise DomainError(f"unknown keys for {family!r} weight: {sorted(unknown)}")
        for key in ("table_x", "table_y"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(family=family, domain=domain, **d)


_COMMON = ("dimension", "factor")
_JSON_KEYS = {
    "power": ("beta", "pivot") + _COMMON,
    "logpower": ("beta", "power") + _COMMON,
    "exp": ("alpha", "argument") + _COMMON,
    "gaussian": ("d",) + _COMMON,
    "distance": ("beta",) + _COMMON,
    "bracket": ("beta",) + _COMMON,
    "profile": ("profile", "rate", "table_x", "table_y", "dimension", "factor"),
    "table": ("table_x", "table_y") + _COMMON,
}


def _xlog(c, x):
    """c * log(x) with the convention 0 * log(anything) = 0."""
    if c == 0:
        return np.zeros_like(x)
    return c * np.log(x)


def _pow(x, c):
    if c == 0:
        return np.ones_like(x)
    return np.power(x, c)


def _bridge_log_psi(r, a):
    """psi = r on (0, 1], psi = exp(a r) on [2, inf), C^1 cubic in log psi between."""
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    lo = r <= 1.0
    hi = r >= 2.0
    mid = ~(lo | hi)
    with np.errstate(divide="ignore"):
        out[lo] = np.log(r[lo])
    out[hi] = a * r[hi]
    s = r[mid] - 1.0
    y0, y1, d0, d1 = 0.0, 2.0 * a, 1.0, a
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    out[mid] = h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1
    return out


# -- constructors ---------------------------------------------------------
def power(beta, pivot="origin", domain=None, **kw):
    return WeightSpec("power", beta=float(beta), pivot=pivot, domain=domain, **kw)


def radial_power(beta, N, domain=None, **kw):
    """|x|^beta on R^N reduced to the radius: r^(beta + N - 1)."""
    return WeightSpec("power", beta=float(beta), dimension=int(N), domain=domain, **kw)


def logpower(beta, power_=0.0, domain=None, **kw):
    return WeightSpec("logpower", beta=float(beta), power=float(power_), domain=domain, **kw)


def exponential(alpha, argument="x", domain=None, **kw):
    return WeightSpec("exp", alpha=float(alpha), argument=argument, domain=domain, **kw)


def gaussian(d, domain=None, **kw):
    return WeightSpec("gaussian", d=float(d), domain=domain, **kw)


def distance_power(beta, domain, **kw):
    return WeightSpec("distance", beta=float(beta), domain=domain, **kw)


def bracket(beta, domain=None, **kw):
    return WeightSpec("bracket", beta=float(beta), domain=domain, **kw)


def model_profile(profile, N, rate=1.0, table=None, domain=None):
    kw = {}
    if table is not None:
        kw = {"table_x": tuple(table[0]), "table_y": tuple(table[1])}
    return WeightSpec("profile", profile=profile, rate=float(rate), dimension=int(N), domain=domain, **kw)


def sampled(xs, ys, domain=None):
    return WeightSpec("table", table_x=tuple(xs), table_y=tuple(ys), domain=domain)


def lebesgue(domain=None):
    return power(0.0, domain=domain)


# -- operations -----------------------------------------------------------
def eval_weight(w: WeightSpec, x):
    """rho(x) at points strictly inside w.domain (no check if domain is None)."""
    xa = np.asarray(x, dtype=float)
    if w.domain is not None:
        if np.any(~((xa > w.domain.left) & (xa < w.domain.right))):
            raise DomainError(f"point outside {w.domain}")
    out = w.value(xa)
    return float(out) if out.ndim == 0 else out


def measure_nu(w: WeightSpec, d: Domain1D | None = None, tol: float = 1e-8) -> float:
    """nu(d) = integral of rho over d; +inf when a divergence certificate is found.

    Raises QuadratureAccuracyError (carrying the best estimate) if the
    integral cannot be resolved to ``tol`` or its finiteness is undecided.
    """
    from .quad import weight_integral

    d = d or w.domain
    if d is None:
        raise DomainError("measure_nu needs a domain")
    return weight_integral(w.log_value, d, tol=tol).value


def check_Bp(w: WeightSpec, p: float, probes) -> bool:
    """True iff |rho|^(1/(1-p)) is integrable on every probe interval."""
    from .quad import QuadratureEvaluationError, integrate

    if not p > 1:
        raise DomainError("check_Bp needs p > 1")
    e = 1.0 / (1.0 - p)
    for probe in probes:
        if w.domain is not None and not (w.domain.left < probe.left and probe.right < w.domain.right):
            raise DomainError(f"probe {probe} is not compactly inside {w.domain}")
        if not probe.bounded:
            raise DomainError("probe intervals must be bounded")
        try:
            res = integrate(lambda x: w.value(x) ** e, probe)
        except QuadratureEvaluationError:
            return False
        if not res.converged:
            return False
    return True


def dominates(pair1, pair2, sample, cap: float = 1e12):
    """Smallest (D_nu, D_mu) over the sample with rho_nu2 <= D_nu rho_nu1 and
    rho_mu1 <= D_mu rho_mu2, or None if a ratio exceeds ``cap``."""
    (nu1, mu1), (nu2, mu2) = pair1, pair2
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise DomainError("empty sample")
    log_dn = np.max(nu2.log_value(x) - nu1.log_value(x))
    log_dm = np.max(mu1.log_value(x) - mu2.log_value(x))
    if not (np.isfinite(log_dn) and np.isfinite(log_dm)):
        return None
    if max(log_dn, log_dm) > math.log(cap):
        return None
    return float(np.exp(log_dn)), float(np.exp(log_dm))
