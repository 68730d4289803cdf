"""Exact computations on Fano 3-fold weighted hypersurfaces and their birational links."""

__version__ = "0.1.0"
