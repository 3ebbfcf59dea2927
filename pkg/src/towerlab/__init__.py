"""Exact L-functions, zeta functions, and rank computations for curves
over function fields, with a verification CLI."""

__version__ = "0.1.0"
