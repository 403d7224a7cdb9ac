"""Minkowski question mark function and the Fourier analysis of its measure."""

__version__ = "0.1.0"
