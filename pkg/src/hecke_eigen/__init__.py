"""Exact verification of Hecke eigensheaf identities for abelian local systems on curves."""

__version__ = "0.1.0"
