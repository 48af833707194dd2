"""Hecke traces on eta-type cusp spaces of half-integral weight."""

__version__ = "0.1.0"
