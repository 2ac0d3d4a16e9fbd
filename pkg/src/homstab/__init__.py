"""Numerical laboratory for (-1)-homogeneous axisymmetric Navier-Stokes flows."""

__version__ = "0.1.0"
