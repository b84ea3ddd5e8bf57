import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpme.domain import Domain1D
from wpme.quad import (
    LogCumulative,
    QuadratureAccuracyError,
    integrate,
    scan_grid,
    sup_search,
    tail_from_decades,
    weight_integral,
)

INF = math.inf


@given(st.floats(-0.9, 4.0))
@settings(max_examples=30)
def test_integrate_power_on_unit(p):
    res = integrate(lambda x: x**p, Domain1D(0.0, 1.0), tol=1e-10)
    assert res.converged
    assert math.isclose(res.value, 1.0 / (p + 1.0), rel_tol=1e-8)


@pytest.mark.parametrize(
    "f, dom, exact",
    [
        (lambda x: np.exp(-x), Domain1D(0.0, INF), 1.0),
        (lambda x: 1.0 / (1.0 + x * x), Domain1D(-INF, INF), math.pi),
        (lambda x: x**-2, Domain1D(1.0, INF), 1.0),
        (lambda x: np.exp(x), Domain1D(-INF, 0.0), 1.0),
    ],
)
def test_integrate_infinite_intervals(f, dom, exact):
    res = integrate(f, dom, tol=1e-10)
    assert res.converged and math.isclose(res.value, exact, rel_tol=1e-8)


def test_integrate_rejects_bad_tol():
    with pytest.raises(ValueError):
        integrate(lambda x: x, Domain1D(0.0, 1.0), tol=0.0)


@given(st.floats(-0.95, 3.0))
@settings(max_examples=25)
def test_weight_integral_power(p):
    wi = weight_integral(lambda x: p * np.log(x), Domain1D(0.0, 1.0))
    assert wi.status == "finite"
    assert math.isclose(wi.value, 1.0 / (p + 1.0), rel_tol=1e-7)


@given(st.floats(0.05, 50.0))
@settings(max_examples=25)
def test_weight_integral_exponential_rates(a):
    wi = weight_integral(lambda x: -a * x, Domain1D(0.0, INF))
    assert math.isclose(wi.value, 1.0 / a, rel_tol=1e-7)


def test_weight_integral_huge_exponent_stays_representable():
    # int_0^1 exp(1e3 x) overflows outside log space
    for a in (1e3, 1e6):
        wi = weight_integral(lambda x: -a * x, Domain1D(0.0, INF))
        assert wi.status == "finite" and math.isclose(wi.value, 1.0 / a, rel_tol=1e-10)
    wi = weight_integral(lambda x: 1e3 * x, Domain1D(0.0, 1.0))
    assert math.isclose(wi.log_value, 1e3 - math.log(1e3), rel_tol=1e-10)


@pytest.mark.parametrize(
    "logf, dom",
    [
        (lambda x: -np.log(x), Domain1D(0.0, 1.0)),
        (lambda x: np.zeros_like(x), Domain1D(0.0, INF)),
        (lambda x: -0.5 * np.log(x), Domain1D(1.0, INF)),
    ],
)
def test_weight_integral_divergence_certificates(logf, dom):
    wi = weight_integral(logf, dom)
    assert wi.status == "infinite" and wi.value == INF


def test_logarithmic_tails_are_classified():
    # 1/(x log^2 x) near 0 is integrable, 1/(x |log x|) is not
    conv = weight_integral(lambda x: -np.log(x) - 2 * np.log(np.abs(np.log(x))), Domain1D(0.0, 0.5))
    assert conv.status == "finite"
    assert math.isclose(conv.value, 1.0 / math.log(2.0), rel_tol=1e-3)
    div = weight_integral(lambda x: -np.log(x) - 0.5 * np.log(np.abs(np.log(x))), Domain1D(0.0, 0.5))
    assert div.status == "infinite"
    # 1/(x |log x|) diverges like log log: too slow to certify either way
    with pytest.raises(QuadratureAccuracyError):
        weight_integral(lambda x: -np.log(x) - np.log(np.abs(np.log(x))), Domain1D(0.0, 0.5))


def test_tail_from_decades_models():
    geo = tail_from_decades(np.log(0.1 ** np.arange(10.0)))
    assert geo.status == "finite"
    flat = tail_from_decades(np.zeros(10))
    assert flat.status == "infinite"
    assert tail_from_decades(np.array([0.0, np.inf])).status == "infinite"
    assert tail_from_decades(np.array([])).status == "finite"


def test_log_cumulative_matches_closed_form():
    grid = scan_grid(Domain1D(0.0, INF), 256)
    cum = LogCumulative(lambda x: -x, grid)
    x = grid.x[10:-10:7]
    assert np.allclose(np.exp(cum.left(x)), -np.expm1(-x), rtol=1e-8)
    assert np.allclose(cum.right(x), -x, atol=1e-8)


def test_scan_grid_is_sorted_and_inside():
    for dom in (Domain1D(0.0, 1.0), Domain1D(-INF, INF), Domain1D(1.0, INF)):
        g = scan_grid(dom, 128)
        assert np.all(np.diff(g.x) > 0)
        assert np.all((g.x > dom.left) & (g.x < dom.right))


def test_sup_search_finds_interior_max_and_growth():
    res = sup_search(lambda x: x * np.exp(-x), Domain1D(0.0, INF))
    assert res.bounded and math.isclose(res.sup, 1.0 / math.e, rel_tol=1e-10)
    assert math.isclose(res.argmax, 1.0, rel_tol=1e-4)
    grow = sup_search(lambda x: np.log(x), Domain1D(1.0, INF), log_values=True)
    assert not grow.bounded and grow.sup == INF
    with pytest.raises(ValueError):
        sup_search(lambda x: x, Domain1D(0.0, 1.0), budget=10)


def test_accuracy_error_carries_best_estimate():
    err = QuadratureAccuracyError("msg", best=3.0)
    assert err.best == 3.0
