"""Open intervals with possibly infinite endpoints."""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """A point or parameter lies outside the admissible set."""


@dataclass(frozen=True)
class Domain1D:
    """The open interval (left, right); either end may be infinite."""

    left: float
    right: float
    name: str = ""

    def __post_init__(self):
        left, right = float(self.left), float(self.right)
        if math.isnan(left) or math.isnan(right):
            raise DomainError("interval endpoints must not be NaN")
        if left == math.inf or right == -math.inf:
            raise DomainError(f"bad endpoint orientation ({left}, {right})")
        if not left < right:
            raise DomainError(f"empty interval ({left}, {right})")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def left_finite(self) -> bool:
        return math.isfinite(self.left)

    @property
    def right_finite(self) -> bool:
        return math.isfinite(self.right)

    @property
    def bounded(self) -> bool:
        return self.left_finite and self.right_finite

    @property
    def length(self) -> float:
        return self.right - self.left

    def contains(self, x) -> bool:
        return self.left < x < self.right

    def truncate(self, L: float) -> "Domain1D":
        """Cut infinite ends so the result is bounded.

        A half-line (a, inf) becomes (a, a + L); the real line becomes (-L, L).
        Finite ends are kept.
        """
        if self.bounded:
            return self
        if L <= 0:
            raise DomainError("truncation length must be positive")
        if not self.left_finite and not self.right_finite:
            return Domain1D(-L, L, self.name)
        if self.left_finite:
            return Domain1D(self.left, self.left + L, self.name)
        return Domain1D(self.right - L, self.right, self.name)

    def to_dict(self) -> dict:
        return {"left": _ext_to_json(self.left), "right": _ext_to_json(self.right), "name": self.name}

    @classmethod
    def from_dict(cls, d: dict) -> "Domain1D":
        return cls(_ext_from_json(d["left"]), _ext_from_json(d["right"]), d.get("name", ""))


def _ext_to_json(v: float):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _ext_from_json(v) -> float:
    if isinstance(v, str):
        return float(v)
    return float(v)


def distance_to_ends(x, dom: Domain1D):
    """min(x - a, b - x) over the finite endpoints of dom."""
    import numpy as np

    x = np.asarray(x, dtype=float)
    d = np.full(x.shape, np.inf)
    if dom.left_finite:
        d = np.minimum(d, x - dom.left)
    if dom.right_finite:
        d = np.minimum(d, dom.right - x)
    return d
