"""Apolar algebras of polynomials: Hilbert functions, standard forms and deformations."""

__version__ = "0.1.0"
