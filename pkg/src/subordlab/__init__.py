"""Numerical admissibility, bound and subordination checks for q(z) = e^z."""

__version__ = "0.1.0"
