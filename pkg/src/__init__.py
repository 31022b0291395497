"""Exact toric master-space engine for weighted blowup factorizations."""

__version__ = "1.0.0"
