"""Exact certification of a positively curved cohomogeneity one metric on P2."""

__version__ = "0.1.0"
