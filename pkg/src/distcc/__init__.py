"""Distinguishability-constrained one-way communication: classical LPs, quantum SDPs and experiments."""

__version__ = "0.1.0"
