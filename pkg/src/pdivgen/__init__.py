"""Generators of multigraded section algebras of polyhedral divisors."""

__version__ = "0.1.0"
