"""Transmission of propositional knowledge as algebraic sets over GF(2)."""

__version__ = "0.1.0"
