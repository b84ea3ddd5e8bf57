"""Weighted porous medium equation: Poincare-type audits, a finite-volume
solver, decay diagnostics and reproducible scenarios."""

__version__ = "0.1.0"
