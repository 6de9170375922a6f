"""Algebra engines: scalars, free algebras, Gröbner bases, skew rings, GSCAs and base-point geometry."""
