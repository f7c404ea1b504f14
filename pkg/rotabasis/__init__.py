"""Exact tensor algebra, SL-invariants and the asymptotic Rota basis solver."""

__version__ = "1.0.0"
