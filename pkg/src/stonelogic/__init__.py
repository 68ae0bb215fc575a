"""Finite Stone-type algebras, rough sets and their many-valued sequent logics."""

__version__ = "0.1.0"
