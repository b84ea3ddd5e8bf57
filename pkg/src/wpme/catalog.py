"""Named weight pairs with a known Poincare-type inequality.

Each entry records the pair (rho_nu, rho_mu), the interval, the inequality
kind ("dirichlet" or "zero_mean") and the expected verdict.  Radial weights
on R^N or exterior domains are stored already reduced to the radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import Domain1D, DomainError
from .weights import (
    WeightSpec,
    bracket,
    distance_power,
    exponential,
    gaussian,
    lebesgue,
    logpower,
    power,
)

INF = math.inf


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    nu: WeightSpec
    mu: WeightSpec
    domain: Domain1D
    kind: str
    expected: str = "holds"
    note: str = ""


def _power_pair(beta, N=1):
    return power(beta - 2.0, dimension=N), power(beta, dimension=N)


def _log_pair(beta):
    # (|log x|^(beta-2) / x, x |log x|^beta)
    return logpower(beta - 2.0, -1.0), logpower(beta, 1.0)


def _distance_pair(beta, dom):
    return distance_power(beta - 2.0, dom), distance_power(beta, dom)


def _bracket_pair(alpha, N):
    return bracket(alpha - 1.0, dimension=N), bracket(alpha, dimension=N)


def _build():
    half = Domain1D(0.0, INF)
    unit = Domain1D(0.0, 1.0)
    ext = Domain1D(1.0, INF)
    line = Domain1D(-INF, INF)
    entries = []

    def add(name, pair, dom, kind, expected="holds", note=""):
        entries.append(CatalogEntry(name, pair[0], pair[1], dom, kind, expected, note))

    # zero-trace inequality
    add("power beta=3 halfline dirichlet", _power_pair(3.0), half, "dirichlet")
    add("power beta=-1 halfline dirichlet", _power_pair(-1.0), half, "dirichlet")
    add("power beta=3 unit dirichlet", _power_pair(3.0), unit, "dirichlet")
    add("power beta=0 unit dirichlet", _power_pair(0.0), unit, "dirichlet")
    add("power beta=3 exterior dirichlet", _power_pair(3.0), ext, "dirichlet")
    add("logpower beta=3 unit dirichlet", _log_pair(3.0), unit, "dirichlet")
    add("logpower beta=0 unit dirichlet", _log_pair(0.0), unit, "dirichlet")
    add("exp alpha=1 line dirichlet", (exponential(1.0), exponential(1.0)), line, "dirichlet")
    add("exp alpha=-1 line dirichlet", (exponential(-1.0), exponential(-1.0)), line, "dirichlet")
    add("distance beta=0.5 unit dirichlet", _distance_pair(0.5, unit), unit, "dirichlet")
    add("distance beta=-1 unit dirichlet", _distance_pair(-1.0, unit), unit, "dirichlet")
    add("radial power N=3 beta=-2 exterior dirichlet", _power_pair(-2.0, N=3), ext, "dirichlet", note="reduced to the radius")
    add(
        "radial exp N=3 alpha=-1 exterior dirichlet",
        (exponential(-1.0, dimension=3), exponential(-1.0, dimension=3)),
        ext,
        "dirichlet",
        note="reduced to the radius",
    )
    # zero-mean inequality
    add("power beta=3 unit zero_mean", _power_pair(3.0), unit, "zero_mean")
    add("power beta=2 unit zero_mean", _power_pair(2.0), unit, "zero_mean")
    add("power beta=0 exterior zero_mean", _power_pair(0.0), ext, "zero_mean")
    add("logpower beta=-1 half-unit zero_mean", _log_pair(-1.0), Domain1D(0.0, 0.5), "zero_mean", note="nu is finite only for beta < 1")
    add("logpower beta=0 half-unit zero_mean", _log_pair(0.0), Domain1D(0.0, 0.5), "zero_mean")
    add(
        "exp alpha=-1 abs line zero_mean",
        (exponential(-1.0, argument="abs"), exponential(-1.0, argument="abs")),
        line,
        "zero_mean",
    )
    add("distance beta=2 unit zero_mean", _distance_pair(2.0, unit), unit, "zero_mean")
    add("distance beta=3 unit zero_mean", _distance_pair(3.0, unit), unit, "zero_mean")
    add("bracket N=3 alpha=-1 radial zero_mean", _bracket_pair(-1.0, 3), half, "zero_mean", note="reduced to the radius")
    add("gaussian d=0.5 line zero_mean", (gaussian(0.5), gaussian(0.5)), line, "zero_mean")
    add(
        "gaussian N=3 d=0.5 radial zero_mean",
        (gaussian(0.5, dimension=3), gaussian(0.5, dimension=3)),
        half,
        "zero_mean",
        note="reduced to the radius",
    )
    # pairs without the inequality
    add("lebesgue halfline dirichlet", (lebesgue(), lebesgue()), half, "dirichlet", expected="fails")
    add("distance beta=1.5 unit dirichlet", _distance_pair(1.5, unit), unit, "dirichlet", expected="fails")
    return {e.name: _attach(e) for e in entries}


def _attach(e: CatalogEntry) -> CatalogEntry:
    # distance weights already carry their domain; attach it to the rest
    nu = e.nu if e.nu.domain is not None else e.nu.on(e.domain)
    mu = e.mu if e.mu.domain is not None else e.mu.on(e.domain)
    return CatalogEntry(e.name, nu, mu, e.domain, e.kind, e.expected, e.note)


CATALOG = _build()


def get(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise DomainError(f"unknown catalog entry {name!r}") from None


def entries(kind: str | None = None, expected: str | None = None) -> list:
    return [e for e in CATALOG.values() if (kind is None or e.kind == kind) and (expected is None or e.expected == expected)]
