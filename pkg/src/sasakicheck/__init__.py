"""Numerical verification of curvature identities on Sasakian manifolds."""

__version__ = "0.1.0"
