"""Holonomic ranks of tautological systems on flag varieties."""

__version__ = "0.1.0"
