"""Cell-centred finite-volume geometry for weighted 1D problems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import Domain1D, DomainError
from .quad import log_panel_integrals, weight_integral
from .weights import WeightSpec

BC_KINDS = ("dirichlet", "neumann")
G_FLOOR = 1e-300
DEFAULT_GRADING = 2.0


class GridError(ArithmeticError):
    """Singular assembly: a weight over- or underflows where it is needed."""


@dataclass(frozen=True, eq=False)
class Grid:
    """Faces, centres, nu-masses and mu-conductances of a 1D cell grid.

    ``g[i]`` couples cells i and i+1.  ``g_left``/``g_right`` couple the
    outer cells to a zero ghost value (Dirichlet sides) and are 0 on
    zero-flux sides.
    """

    faces: np.ndarray
    centers: np.ndarray
    masses: np.ndarray
    g: np.ndarray
    g_left: float
    g_right: float
    bc: tuple
    grading: tuple
    domain: Domain1D
    flags: tuple = ()
    truncation: float | None = None
    far_policy: str | None = None
    meta: dict = field(default_factory=dict)

    @property
    def M(self) -> int:
        return self.centers.size

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.faces)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def stiffness_bands(self):
        """Diagonal and off-diagonal of the symmetric stiffness matrix."""
        diag = np.zeros(self.M)
        diag[:-1] += self.g
        diag[1:] += self.g
        diag[0] += self.g_left
        diag[-1] += self.g_right
        return diag, -self.g


def face_map(s, grading):
    """Map the uniform reference [0,1] to itself, clustering toward graded ends."""
    gl, gr = grading
    s = np.asarray(s, dtype=float)
    if gl == 1.0 and gr == 1.0:
        return s.copy()
    if gr == 1.0:
        return s**gl
    if gl == 1.0:
        return 1.0 - (1.0 - s) ** gr
    out = np.empty_like(s)
    lo = s <= 0.5
    out[lo] = 0.5 * (2.0 * s[lo]) ** gl
    out[~lo] = 1.0 - 0.5 * (2.0 * (1.0 - s[~lo])) ** gr
    return out


def endpoint_is_singular(w: WeightSpec, end: float, inward: float, length: float) -> bool:
    """Heuristic: the weight changes by more than sqrt(10) between distances
    1e-8 and 1e-4 (relative to ``length``) from a finite endpoint."""
    d1, d2 = 1e-8 * length, 1e-4 * length
    lv = w.log_value(np.array([end + inward * d1, end + inward * d2]))
    if not np.all(np.isfinite(lv)):
        return True
    return abs(lv[0] - lv[1]) > 0.5 * math.log(10.0)


def auto_grading(nu: WeightSpec, mu: WeightSpec, domain: Domain1D, base: Domain1D, gamma: float = DEFAULT_GRADING):
    """Grading exponents per side: ``gamma`` at original finite endpoints where
    either weight is singular or degenerate, 1 elsewhere."""
    out = []
    for side, end, inward in (("left", domain.left, 1.0), ("right", domain.right, -1.0)):
        orig = base.left if side == "left" else base.right
        if end != orig:
            out.append(1.0)  # truncation face
            continue
        sing = endpoint_is_singular(nu, end, inward, domain.length) or endpoint_is_singular(mu, end, inward, domain.length)
        out.append(gamma if sing else 1.0)
    return tuple(out)


def assemble_grid(
    nu: WeightSpec,
    mu: WeightSpec,
    domain: Domain1D,
    M: int,
    bc=("dirichlet", "dirichlet"),
    grading=None,
    truncation: float | None = None,
    far_policy: str | None = None,
) -> Grid:
    """Build the cell grid on ``domain`` (truncated to length ``truncation`` if unbounded).

    ``bc`` gives the condition at the original endpoints; ``far_policy``
    ("neumann" zero-flux or "dirichlet" zero value) applies at truncation
    faces.  Cells whose nu-mass is infinite (non-integrable density at an
    endpoint) are dropped and the boundary moves to their inner face, which
    keeps the zero trace there; such removals are recorded in ``flags``.
    """
    if M < 8:
        raise DomainError("need at least 8 cells")
    bc = tuple(bc)
    if any(b not in BC_KINDS for b in bc):
        raise DomainError(f"boundary kinds must be in {BC_KINDS}")
    base = domain
    comp = domain
    if not domain.bounded:
        if truncation is None:
            raise DomainError("unbounded domain needs a truncation length")
        comp = domain.truncate(truncation)
        far_policy = far_policy or "neumann"
        if far_policy not in BC_KINDS:
            raise DomainError("far policy must be 'neumann' or 'dirichlet'")
    else:
        truncation = None
        far_policy = None
    side_bc = []
    for side in (0, 1):
        orig = base.left if side == 0 else base.right
        end = comp.left if side == 0 else comp.right
        side_bc.append(bc[side] if end == orig else far_policy)
    if grading is None:
        grading = auto_grading(nu, mu, comp, base)
    elif np.isscalar(grading):
        grading = (float(grading), float(grading))
    grading = tuple(float(x) for x in grading)
    if min(grading) < 1.0:
        raise DomainError("grading exponents must be >= 1")

    s = np.linspace(0.0, 1.0, M + 1)
    faces = comp.left + comp.length * face_map(s, grading)
    faces[0], faces[-1] = comp.left, comp.right
    flags = []

    # nu-masses; endpoint cells of the original domain get a tail-certified integral
    log_m, conv = log_panel_integrals(nu.log_value, faces[:-1], faces[1:], tol=1e-10)
    for side, idx in (("left", 0), ("right", -1)):
        orig = base.left if side == "left" else base.right
        end = faces[0] if side == "left" else faces[-1]
        if end != orig:
            continue
        cell = Domain1D(faces[0], faces[1]) if side == "left" else Domain1D(faces[-2], faces[-1])
        wi = weight_integral(nu.log_value, cell, tol=1e-10, budget=128)
        log_m[idx] = wi.log_value
    masses = np.exp(log_m)
    keep = np.isfinite(masses)
    if not np.all(keep[1:-1]):
        raise GridError("infinite nu-mass in an interior cell")
    if not keep[0]:
        if side_bc[0] != "dirichlet":
            raise GridError("nu-mass diverges at the left end; only a zero trace is meaningful there")
        flags.append("dropped_left_cell")
    if not keep[-1]:
        if side_bc[1] != "dirichlet":
            raise GridError("nu-mass diverges at the right end; only a zero trace is meaningful there")
        flags.append("dropped_right_cell")
    lo = 0 if keep[0] else 1
    hi = M if keep[-1] else M - 1
    faces = faces[lo : hi + 1]
    masses = masses[lo:hi]
    if np.any(masses <= 0):
        bad = np.flatnonzero(masses <= 0)[0]
        raise GridError(f"nu-mass underflow in cell [{faces[bad]}, {faces[bad + 1]}]")

    # conductances; merge cells across faces where mu underflows
    while True:
        centers = 0.5 * (faces[:-1] + faces[1:])
        log_mu_face = mu.log_value(faces[1:-1])
        with np.errstate(divide="ignore"):
            log_g = log_mu_face - np.log(np.diff(centers))
        if np.any(np.isnan(log_g)) or np.any(np.isposinf(log_g)):
            bad = faces[1:-1][~np.isfinite(log_g) & ~np.isneginf(log_g)]
            raise GridError(f"mu is not finite at face x = {bad[0]!r}")
        small = np.flatnonzero(log_g < math.log(G_FLOOR))
        if small.size == 0:
            break
        j = small[0]
        flags.append(f"merged_cells_at_x={faces[j + 1]!r}")
        masses = np.concatenate([masses[:j], [masses[j] + masses[j + 1]], masses[j + 2 :]])
        faces = np.delete(faces, j + 1)
        if faces.size < 3:
            raise GridError("every face underflowed")
    g = np.exp(log_g)

    def boundary_g(side):
        if side_bc[side] != "dirichlet":
            return 0.0
        f0 = faces[0] if side == 0 else faces[-1]
        c0 = centers[0] if side == 0 else centers[-1]
        half = abs(c0 - f0)
        orig = base.left if side == 0 else base.right
        dropped = (side == 0 and not keep[0]) or (side == 1 and not keep[-1])
        # at an original endpoint the weight may vanish or blow up; sample the
        # middle of the half cell instead of the endpoint itself
        xe = f0 if (f0 != orig or dropped) else 0.5 * (f0 + c0)
        val = float(np.exp(mu.log_value(np.array([xe]))[0])) / half
        if not math.isfinite(val):
            raise GridError(f"boundary conductance not finite near x = {f0!r}")
        return val

    return Grid(
        faces=faces,
        centers=centers,
        masses=masses,
        g=g,
        g_left=boundary_g(0),
        g_right=boundary_g(1),
        bc=tuple(side_bc),
        grading=grading,
        domain=Domain1D(faces[0], faces[-1]),
        flags=tuple(flags),
        truncation=truncation,
        far_policy=far_policy,
        meta={"base_domain": base, "requested_cells": M},
    )
