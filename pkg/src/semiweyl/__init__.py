"""Numerical verification of statistical and semi-Weyl structures with
torsion on coordinate charts."""

__version__ = "0.1.0"
