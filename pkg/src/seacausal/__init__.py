"""Numerics for regularized Dirac-sea causal fermion systems."""

__version__ = "0.1.0"
