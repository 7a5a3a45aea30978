"""Exact circle-angle combinatorics, invariant laminations, and a numerical
ray/raster engine for the quadratic rational family a/(z^2+2z)."""

__version__ = "0.1.0"
