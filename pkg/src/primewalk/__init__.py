"""Dirichlet-character random walks over the primes: characters, walk series,
L-function evaluation, residue statistics and block ensembles."""

__version__ = "0.1.0"
