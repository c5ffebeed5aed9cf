"""Exact feasibility analysis for spherical 3-distance 5-designs."""

__version__ = "0.1.0"
