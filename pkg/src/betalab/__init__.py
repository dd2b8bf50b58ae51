"""Exact-arithmetic laboratory for beta-expansions of Pisot numbers."""

__version__ = "0.1.0"
