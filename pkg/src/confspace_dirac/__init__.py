"""Numerical laboratory for Dirac-type operators on a truncated
gauge-connection configuration space."""

__version__ = "0.1.0"
