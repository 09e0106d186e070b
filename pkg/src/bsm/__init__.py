"""Discrete presentations of stable b-symplectic manifolds: validation,
Morita equivalence, outer automorphisms and Picard groups."""

__version__ = "0.1.0"
