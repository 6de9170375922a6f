"""Skew Clifford toolkit - exact analysis of graded skew Clifford algebras and their quadric systems."""

__version__ = "0.3.0"
