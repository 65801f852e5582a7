"""Spectral and dynamical chaos diagnostics for Grover search and the QFT."""

__version__ = "0.1.0"
