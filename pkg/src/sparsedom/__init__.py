"""Dyadic harmonic-analysis toolkit on uniform grids."""
__version__ = "0.1.0"
