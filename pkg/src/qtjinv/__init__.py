"""Quantum modular invariants of quadratic units over F_q(T)."""

__version__ = "0.1.0"
