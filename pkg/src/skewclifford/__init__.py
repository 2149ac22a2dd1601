"""Exact computations with graded skew Clifford algebras and their quadric systems."""

__version__ = "0.1.0"
