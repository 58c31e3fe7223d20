"""Exact certification of the six sporadic complex-hyperbolic triangle-group lattices."""

__version__ = "0.1.0"

SUPPORTED_P = (3, 4, 5, 6, 8, 12)
