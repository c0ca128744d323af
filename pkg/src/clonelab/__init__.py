"""Finitary operations, clones and commutants over finite rigs."""

__version__ = "0.1.0"
