"""Operator-algebra laboratory for the integrable trotterization of the critical Ising chain."""

__version__ = "0.1.0"
