"""Stokes Green matrices in the half-space and edge/vertex exponents of wedge pencils."""
__version__ = "0.1.0"
