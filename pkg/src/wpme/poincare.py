"""Validity and constants of weighted Poincare-type inequalities in 1D.

Integral criteria
-----------------
For nu, mu with densities rho_nu, rho_mu on (a, b):

* Dirichlet form ||v||_{2;nu} <= C_P ||v'||_{2;mu} holds iff for some split
  point c both Hardy functionals are finite:
      B_L(a, c) = sup_x (int_x^c rho_nu)(int_a^x 1/rho_mu)
      B_R(c, b) = sup_x (int_c^x rho_nu)(int_x^b 1/rho_mu)
  with B_L(a, a) = B_R(b, b) = 0.
* Zero-mean form ||v - vbar||_{2;nu} <= M_P ||v'||_{2;mu} (nu finite) holds iff
  K_L + K_R < inf, where
      K_L = sup_x (int_x^b rho_nu) int_a^x N(y)^2 / rho_mu(y) dy,
      N(y) = int_a^y rho_nu,
  and K_R is the mirror image.

All integrals are computed in log space (see ``quad``) so that exponential
weights never overflow.

Discrete constants
------------------
C_P and M_P are estimated from the smallest (nontrivial) eigenvalue of the
finite-volume pencil K v = lambda M v by inverse iteration.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.linalg import cho_solve_banded, cholesky_banded
from scipy.special import xlogy

from .domain import Domain1D, DomainError
from .grid import Grid, assemble_grid
from .quad import (
    QuadratureAccuracyError,
    LogCumulative,
    scan_grid,
    sup_search,
    weight_integral,
)
from .weights import WeightSpec, model_profile

HOLDS, FAILS, INCONCLUSIVE = "holds", "fails", "inconclusive"


class PreconditionError(ValueError):
    """An operation was called outside its domain (e.g. infinite nu-measure)."""


class EigenConvergenceError(ArithmeticError):
    """Inverse iteration did not converge within its iteration budget."""


@dataclass
class Functional:
    """Value of a sup-of-products functional with its finiteness status."""

    value: float
    status: str  # "finite", "infinite", "inconclusive"
    argmax: float = float("nan")
    x: np.ndarray | None = field(default=None, repr=False)
    log_products: np.ndarray | None = field(default=None, repr=False)

    def __float__(self):
        return float(self.value)

    @property
    def finite(self) -> bool:
        return self.status == "finite"

    def products(self) -> np.ndarray:
        """The product at every scan point (not in log form)."""
        return np.exp(self.log_products)


ZERO = Functional(0.0, "finite")


def _tail_status(*tails):
    sts = {t.status for t in tails}
    if "infinite" in sts:
        return "infinite"
    if "inconclusive" in sts:
        return "inconclusive"
    return "finite"


def _sup_functional(log_g, dom, grid, budget):
    res = sup_search(log_g, dom, budget=budget, log_values=True, grid=grid)
    status = "finite" if res.bounded else "infinite"
    return Functional(res.sup if res.bounded else math.inf, status, res.argmax, res.x, res.values)


def _hardy(nu: WeightSpec, mu: WeightSpec, a: float, b: float, side: str, budget: int) -> Functional:
    if a == b:
        return ZERO
    dom = Domain1D(a, b)
    grid = scan_grid(dom, budget)
    cnu = LogCumulative(nu.log_value, grid)
    cmu = LogCumulative(lambda x: -mu.log_value(x), grid)
    if side == "L":
        # (int_x^b rho_nu)(int_a^x 1/rho_mu)
        st = _tail_status(cnu.right_tail, cmu.left_tail)
        if st != "finite":
            return Functional(math.inf if st == "infinite" else math.nan, st)
        nodes = cnu.cum_right + cmu.cum_left

        def log_g(x):
            return cnu.right(x) + cmu.left(x)
    else:
        st = _tail_status(cnu.left_tail, cmu.right_tail)
        if st != "finite":
            return Functional(math.inf if st == "infinite" else math.nan, st)
        nodes = cnu.cum_left + cmu.cum_right

        def log_g(x):
            return cnu.left(x) + cmu.right(x)

    def log_g_fast(x):
        x = np.asarray(x, dtype=float)
        if x.shape == grid.x.shape and np.array_equal(x, grid.x):
            return nodes
        return log_g(x)

    return _sup_functional(log_g_fast, dom, grid, budget)


def hardy_BL(nu: WeightSpec, mu: WeightSpec, a: float, b: float, budget: int = 256) -> Functional:
    """sup_x (int_x^b rho_nu)(int_a^x 1/rho_mu); B_L(a, a) = 0."""
    return _hardy(nu, mu, a, b, "L", budget)


def hardy_BR(nu: WeightSpec, mu: WeightSpec, a: float, b: float, budget: int = 256) -> Functional:
    """sup_x (int_a^x rho_nu)(int_x^b 1/rho_mu); B_R(b, b) = 0."""
    return _hardy(nu, mu, a, b, "R", budget)


def split_candidates(domain: Domain1D, n_interior: int = 33) -> list:
    """Both endpoints followed by interior points equally spaced in arctan(x)."""
    ta, tb = math.atan(domain.left), math.atan(domain.right)
    theta = ta + (tb - ta) * np.arange(1, n_interior + 1) / (n_interior + 1)
    interior = [float(math.tan(t)) for t in theta]
    return [domain.left, domain.right] + interior


@dataclass
class DirichletVerdict:
    verdict: str
    c: float | None
    B_L: Functional | None
    B_R: Functional | None
    tried: list = field(default_factory=list)


def dirichlet_poincare_verdict(nu: WeightSpec, mu: WeightSpec, domain: Domain1D, budget: int = 256) -> DirichletVerdict:
    """Search for a split point c with B_L(a, c) and B_R(c, b) finite.

    Candidates are tried in order (endpoints first) and the search stops at
    the first admissible c.  The verdict is inconclusive if no candidate
    works and some functional could not be classified.
    """
    a, b = domain.left, domain.right
    tried = []
    any_inconclusive = False
    for c in split_candidates(domain):
        try:
            bl = hardy_BL(nu, mu, a, c, budget) if c != a else ZERO
            bl_ok = bl.finite
            br = hardy_BR(nu, mu, c, b, budget) if (c != b and bl_ok) else (ZERO if c == b else None)
        except QuadratureAccuracyError:
            any_inconclusive = True
            tried.append((c, "inconclusive", "inconclusive"))
            continue
        br_status = br.status if br is not None else "skipped"
        tried.append((c, bl.status, br_status))
        if bl.status == "inconclusive" or br_status == "inconclusive":
            any_inconclusive = True
        if bl_ok and br is not None and br.finite:
            return DirichletVerdict(HOLDS, c, bl, br, tried)
    return DirichletVerdict(INCONCLUSIVE if any_inconclusive else FAILS, None, None, None, tried)


def nu_measure_checked(nu: WeightSpec, domain: Domain1D) -> float:
    try:
        wi = weight_integral(nu.log_value, domain)
    except QuadratureAccuracyError as err:
        raise PreconditionError(f"cannot decide whether nu({domain}) is finite") from err
    if wi.status == "infinite":
        raise PreconditionError(f"nu({domain}) is infinite; the zero-mean inequality is undefined")
    return wi.value


def _zero_mean(nu: WeightSpec, mu: WeightSpec, a: float, b: float, side: str, budget: int) -> Functional:
    dom = Domain1D(a, b)
    nu_measure_checked(nu, dom)
    grid = scan_grid(dom, budget)
    cnu = LogCumulative(nu.log_value, grid)
    # inner cumulative nu-integral from the relevant end, interpolated monotonically
    inner = cnu.cum_left if side == "L" else cnu.cum_right
    xs = grid.x
    ok = np.isfinite(inner)
    interp = PchipInterpolator(xs[ok], inner[ok], extrapolate=True)

    def log_h(y):
        return 2.0 * interp(y) - mu.log_value(y)

    outer = LogCumulative(log_h, grid)
    if side == "L":
        st = _tail_status(outer.left_tail)
        nodes = cnu.cum_right + outer.cum_left

        def log_g(x):
            return cnu.right(x) + outer.left(x)
    else:
        st = _tail_status(outer.right_tail)
        nodes = cnu.cum_left + outer.cum_right

        def log_g(x):
            return cnu.left(x) + outer.right(x)

    if st != "finite":
        return Functional(math.inf if st == "infinite" else math.nan, st)

    def log_g_fast(x):
        x = np.asarray(x, dtype=float)
        if x.shape == xs.shape and np.array_equal(x, xs):
            return nodes
        return log_g(x)

    return _sup_functional(log_g_fast, dom, grid, budget)


def zero_mean_KL(nu: WeightSpec, mu: WeightSpec, a: float, b: float, budget: int = 256) -> Functional:
    """sup_x (int_x^b rho_nu) int_a^x (int_a^y rho_nu)^2 / rho_mu(y) dy."""
    return _zero_mean(nu, mu, a, b, "L", budget)


def zero_mean_KR(nu: WeightSpec, mu: WeightSpec, a: float, b: float, budget: int = 256) -> Functional:
    """sup_x (int_a^x rho_nu) int_x^b (int_y^b rho_nu)^2 / rho_mu(y) dy."""
    return _zero_mean(nu, mu, a, b, "R", budget)


@dataclass
class ZeroMeanVerdict:
    verdict: str
    K_L: Functional
    K_R: Functional


def zero_mean_verdict(nu: WeightSpec, mu: WeightSpec, domain: Domain1D, budget: int = 256) -> ZeroMeanVerdict:
    kl = zero_mean_KL(nu, mu, domain.left, domain.right, budget)
    kr = zero_mean_KR(nu, mu, domain.left, domain.right, budget)
    sts = {kl.status, kr.status}
    if "infinite" in sts:
        v = FAILS
    elif "inconclusive" in sts:
        v = INCONCLUSIVE
    else:
        v = HOLDS
    return ZeroMeanVerdict(v, kl, kr)


# ---------------------------------------------------------------------------
# discrete constants
# ---------------------------------------------------------------------------
@dataclass
class EigenResult:
    lam: float
    vector: np.ndarray
    iterations: int
    residual: float


def _banded_upper(diag, off):
    ab = np.zeros((2, diag.size))
    ab[0, 1:] = off
    ab[1, :] = diag
    return ab


def smallest_eigenpair(grid: Grid, deflate_constants: bool, tol: float = 1e-8, max_iter: int = 20_000) -> EigenResult:
    """Smallest eigenvalue of K v = lambda M v (nontrivial one if deflating).

    Inverse iteration with banded Cholesky solves.  With deflation the
    iterate is kept nu-orthogonal to constants and the pencil is shifted,
    (K + s M) w = M v with s a small fraction of the starting Rayleigh
    quotient, so every solve is positive definite; the constant mode (shifted
    eigenvalue s) is projected out after each solve.  The relative residual
    ||K v - lambda M v||_{M^-1} / lambda must fall below ``tol``; a residual
    that has stagnated below 1e-6 for 50 sweeps is accepted too, since the
    eigenvalue error is of the order of its square.
    """
    diag, off = grid.stiffness_bands()
    m = grid.masses
    n = m.size

    def apply_k(x):
        y = diag * x
        y[:-1] += off * x[1:]
        y[1:] += off * x[:-1]
        return y

    def project(x):
        return x - np.sum(m * x) / m.sum() if deflate_constants else x

    if deflate_constants:
        if grid.g_left or grid.g_right:
            raise PreconditionError("deflation needs zero-flux boundaries")
        v = project(grid.centers.copy())
        shift = 0.05 * float(v @ apply_k(v)) / float(np.sum(m * v * v))
    else:
        v = np.ones(n)
        shift = 0.0
    chol = cholesky_banded(_banded_upper(diag + shift * m, off), lower=False)
    v /= math.sqrt(np.sum(m * v * v))
    lam = float(v @ apply_k(v))
    res = math.inf
    best, since_best = math.inf, 0
    for it in range(1, max_iter + 1):
        w = project(cho_solve_banded((chol, False), m * v))
        v = w / math.sqrt(np.sum(m * w * w))
        kv = apply_k(v)
        lam = float(v @ kv)
        r = kv - lam * m * v
        res = math.sqrt(np.sum(r * r / m)) / lam
        if res < tol:
            return EigenResult(lam, v, it, res)
        if res < 0.999 * best:
            best, since_best = res, 0
        else:
            since_best += 1
            if since_best >= 50 and best < 1e-6:
                return EigenResult(lam, v, it, res)
    raise EigenConvergenceError(f"inverse iteration stalled at relative residual {res:.3e}")


@dataclass
class TraceEntry:
    cells: int
    truncation: float | None
    estimate: float
    eigenvalue: float
    iterations: int


@dataclass
class DiscreteConstant:
    kind: str
    estimate: float
    last: float
    trace: list
    diverging: bool
    extrapolation: str


def divergence_flag(values, growth: float = 0.25, min_steps: int = 4) -> bool:
    """True if every step grows by >= ``growth`` across at least ``min_steps`` steps."""
    v = np.asarray(values, dtype=float)
    if v.size < min_steps + 1:
        return False
    ratios = v[1:] / v[:-1]
    return bool(np.all(ratios >= 1.0 + growth))


def discrete_constant(
    kind: str,
    nu: WeightSpec,
    mu: WeightSpec,
    domain: Domain1D,
    grid_sizes=(250, 500, 1000, 2000),
    truncations=(None,),
    grading=None,
) -> DiscreteConstant:
    """Estimate C_P (kind "dirichlet") or M_P (kind "zero_mean").

    Each (cells, truncation) pair gives one eigen-solve.  Unbounded domains
    need finite truncations; Dirichlet kind puts zero values at truncation
    faces, zero-mean kind zero flux.  The estimate is Richardson-extrapolated
    in the grid spacing (second order) on the largest truncation, then in
    1/L^2 over truncations.
    """
    if kind not in ("dirichlet", "zero_mean"):
        raise DomainError("kind must be 'dirichlet' or 'zero_mean'")
    if kind == "zero_mean":
        nu_measure_checked(nu, domain)
    if domain.bounded:
        truncations = (None,)
    elif any(L is None for L in truncations):
        raise DomainError("unbounded domain needs finite truncation lengths")
    bc = ("dirichlet", "dirichlet") if kind == "dirichlet" else ("neumann", "neumann")
    far = "dirichlet" if kind == "dirichlet" else "neumann"
    trace = []
    for L in truncations:
        for M in grid_sizes:
            grid = assemble_grid(nu, mu, domain, M, bc=bc, grading=grading, truncation=L, far_policy=far)
            eig = smallest_eigenpair(grid, deflate_constants=(kind == "zero_mean"))
            trace.append(TraceEntry(M, L, 1.0 / math.sqrt(eig.lam), eig.lam, eig.iterations))
    values = [t.estimate for t in trace]
    last = values[-1]
    diverging = divergence_flag(values)
    est, how = _extrapolate(trace, grid_sizes, truncations)
    if diverging:
        est, how = math.inf, "diverging"
    return DiscreteConstant(kind, est, last, trace, diverging, how)


def _extrapolate(trace, grid_sizes, truncations):
    by_L = {}
    for t in trace:
        by_L.setdefault(t.truncation, []).append(t)
    lam_L = []
    for L in truncations:
        ts = sorted(by_L[L], key=lambda t: t.cells)
        if len(ts) >= 2 and ts[-1].cells == 2 * ts[-2].cells:
            lam = (4.0 * ts[-1].eigenvalue - ts[-2].eigenvalue) / 3.0
        else:
            lam = ts[-1].eigenvalue
        lam_L.append((L, lam))
    how = "richardson-h2" if len(grid_sizes) >= 2 else "none"
    if len(lam_L) >= 2 and lam_L[-1][0] is not None:
        (L1, l1), (L2, l2) = lam_L[-2], lam_L[-1]
        lam = (L2**2 * l2 - L1**2 * l1) / (L2**2 - L1**2)
        how += "+richardson-L2"
    else:
        lam = lam_L[-1][1]
    if not lam > 0:
        return 1.0 / math.sqrt(trace[-1].eigenvalue), "none"
    return 1.0 / math.sqrt(lam), how


# ---------------------------------------------------------------------------
# weak inequality
# ---------------------------------------------------------------------------
def trial_battery(grid: Grid) -> dict:
    """Discrete trial functions: constant, hats, truncated powers, cosines."""
    a, b = grid.domain.left, grid.domain.right
    s = (grid.centers - a) / (b - a)
    out = {"constant": np.ones_like(s)}
    for c in (0.1, 0.25, 0.5, 0.75, 0.9):
        for w in (0.05, 0.2):
            out[f"hat(c={c},w={w})"] = np.maximum(0.0, 1.0 - np.abs(s - c) / w)
    for p in (0.5, 1.0, 2.0, 4.0):
        out[f"power(p={p})"] = s**p
        out[f"power_right(p={p})"] = (1.0 - s) ** p
        out[f"truncated(p={p})"] = np.maximum(0.0, s - 0.5) ** p
    for k in range(1, 9):
        out[f"cos(k={k})"] = np.cos(k * math.pi * s)
        out[f"1+cos(k={k})"] = 1.0 + np.cos(k * math.pi * s)
    return out


@dataclass
class WeakPoincare:
    W_P: float
    worst_trial: str
    bound: float | None
    verdict: str
    ratios: dict


def weak_poincare_check(
    nu: WeightSpec,
    mu: WeightSpec,
    domain: Domain1D,
    trials: dict | None = None,
    cells: int = 400,
    r: float = 1.0,
    truncation: float | None = None,
    with_bound: bool = True,
) -> WeakPoincare:
    """max over trials of ||v||_{2;nu} / (||v'||_{2;mu} + ||v||_{r;nu}).

    r = 1 is the weak Poincare inequality; r = q0/m gives its q0/m-norm
    variant.  The bound 2 max(M_P, nu^{-1/2}) uses the discrete M_P on the
    same grid and is only reported for r = 1.
    """
    nu_measure_checked(nu, domain)
    grid = assemble_grid(nu, mu, domain, cells, bc=("neumann", "neumann"), truncation=truncation, far_policy="neumann")
    trials = trials if trials is not None else trial_battery(grid)
    m, g = grid.masses, grid.g
    ratios = {}
    for name, v in trials.items():
        v = np.asarray(v, dtype=float)
        n2 = math.sqrt(np.sum(m * v * v))
        grad = math.sqrt(np.sum(g * np.diff(v) ** 2))
        nr = np.sum(m * np.abs(v) ** r) ** (1.0 / r)
        den = grad + nr
        ratios[name] = n2 / den if den > 0 else (0.0 if n2 == 0 else math.inf)
    worst = max(ratios, key=ratios.get)
    wp = ratios[worst]
    bound = None
    verdict = HOLDS if math.isfinite(wp) else FAILS
    if with_bound and r == 1.0:
        eig = smallest_eigenpair(grid, deflate_constants=True)
        mp = 1.0 / math.sqrt(eig.lam)
        bound = 2.0 * max(mp, grid.total_mass ** -0.5)
        if wp > bound * (1 + 1e-9):
            verdict = FAILS
    return WeakPoincare(wp, worst, bound, verdict, ratios)


# ---------------------------------------------------------------------------
# model manifolds
# ---------------------------------------------------------------------------
@dataclass
class GapResult:
    Q: float
    verdict: str
    radii: list
    values: list


def riemannian_gap(psi, N: int, r_max: float = 40.0, budget: int = 256, rate: float = 1.0, levels: int = 4) -> GapResult:
    """sup over 0 < xi < r <= R of (int_0^xi psi^(N-1))(int_xi^r psi^(1-N)).

    ``psi`` is a profile name (see ``weights.PROFILES``), an (r, psi) table,
    or a profile WeightSpec.  The functional is evaluated for R = r_max 2^-j,
    j = levels-1..0; it is declared bounded if it grows by less than 5% over
    the last doubling of R.
    """
    if isinstance(psi, WeightSpec):
        w = psi
    elif isinstance(psi, str):
        w = model_profile(psi, N, rate=rate)
    else:
        w = model_profile("table", N, table=psi)
    radii = [r_max * 2.0 ** (-j) for j in range(levels - 1, -1, -1)]
    vals = []
    for R in radii:
        # for fixed xi the product increases with r, so r = R is extremal
        f = hardy_BR(w, w, 0.0, R, budget)
        vals.append(f.value if f.status == "finite" else math.inf)
    q = vals[-1]
    if not math.isfinite(q):
        return GapResult(math.inf, FAILS, radii, vals)
    growth = vals[-1] / vals[-2] - 1.0
    verdict = HOLDS if growth < 0.05 else FAILS
    return GapResult(q if verdict == HOLDS else math.inf, verdict, radii, vals)


# ---------------------------------------------------------------------------
# closed-form constants
# ---------------------------------------------------------------------------
def M_Pa_constant(a: float, M_P: float, nu_measure: float) -> float:
    """2^(1 - a/2) nu(Omega)^((1-a)/2) M_P^a, the constant of the
    interpolated zero-mean inequality ||v - vbar||_{2;nu} <= M_{P,a} ||v'||^a ||v - vbar||^(1-a)."""
    if not (0 < a <= 1):
        raise DomainError("a must lie in (0, 1]")
    if not (M_P > 0 and nu_measure > 0):
        raise DomainError("M_P and nu(Omega) must be positive")
    return 2.0 ** (1 - a / 2) * nu_measure ** ((1 - a) / 2) * M_P**a


def c_alpha_beta(alpha: float, beta: float) -> float:
    """1 + s^s (1-s)^(1-s) with s = beta/alpha and 0^0 = 1."""
    if not (0 < beta < alpha < 1):
        raise DomainError("need 0 < beta < alpha < 1")
    s = beta / alpha
    return 1.0 + math.exp(xlogy(s, s) + xlogy(1 - s, 1 - s))


def lemma_sides(x, y, alpha, beta):
    """Left side x^-a y^(1-a) + x^-b y^(1-b) + y and right side c (x^-a y^(1-a) + y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t1 = x**-alpha * y ** (1 - alpha)
    lhs = t1 + x**-beta * y ** (1 - beta) + y
    rhs = c_alpha_beta(alpha, beta) * (t1 + y)
    return lhs, rhs


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------
@dataclass
class PoincareReport:
    B_L: float | None = None
    B_R: float | None = None
    split_point: float | None = None
    K_L: float | None = None
    K_R: float | None = None
    C_P: float | None = None
    M_P: float | None = None
    W_P: float | None = None
    Q: float | None = None
    verdicts: dict = field(default_factory=dict)
    refinement_trace: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        return _jsonable(d)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def audit(
    nu: WeightSpec,
    mu: WeightSpec,
    domain: Domain1D,
    kinds=("dirichlet", "zero_mean"),
    grid_sizes=(200, 400, 800, 1600),
    truncations=(20.0, 40.0, 80.0),
    discrete: bool = True,
    budget: int = 256,
) -> PoincareReport:
    """Integral criteria plus discrete constants for the requested inequality kinds."""
    rep = PoincareReport()
    if "dirichlet" in kinds:
        dv = dirichlet_poincare_verdict(nu, mu, domain, budget)
        rep.verdicts["dirichlet"] = dv.verdict
        if dv.verdict == HOLDS:
            rep.split_point, rep.B_L, rep.B_R = dv.c, dv.B_L.value, dv.B_R.value
        if discrete:
            dc = discrete_constant("dirichlet", nu, mu, domain, grid_sizes, truncations)
            rep.C_P = dc.estimate
            rep.refinement_trace["dirichlet"] = [asdict(t) for t in dc.trace]
            if dc.diverging:
                rep.notes.append("discrete C_P diverges under refinement")
    if "zero_mean" in kinds or "weak" in kinds:
        try:
            nu_measure_checked(nu, domain)
            finite_nu = True
        except PreconditionError as err:
            finite_nu = False
            rep.notes.append(str(err))
            for k in ("zero_mean", "weak"):
                if k in kinds:
                    rep.verdicts[k] = FAILS
        if finite_nu and "zero_mean" in kinds:
            zv = zero_mean_verdict(nu, mu, domain, budget)
            rep.verdicts["zero_mean"] = zv.verdict
            rep.K_L, rep.K_R = zv.K_L.value, zv.K_R.value
            if discrete:
                dc = discrete_constant("zero_mean", nu, mu, domain, grid_sizes, truncations)
                rep.M_P = dc.estimate
                rep.refinement_trace["zero_mean"] = [asdict(t) for t in dc.trace]
        if finite_nu and "weak" in kinds:
            L = None if domain.bounded else max(truncations)
            wp = weak_poincare_check(nu, mu, domain, truncation=L)
            rep.W_P = wp.W_P
            rep.verdicts["weak"] = wp.verdict
    return rep
