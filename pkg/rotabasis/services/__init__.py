"""Computational services, one module per concern."""
