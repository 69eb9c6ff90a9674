"""Flock generalized quadrangles, hemisystems, and exact hemisystem search."""

__version__ = "0.1.0"
