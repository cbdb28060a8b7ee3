"""Polygonal sums with almost-prime inputs: lattice counts, local densities
and sieve arithmetic."""

__version__ = "0.1.0"
