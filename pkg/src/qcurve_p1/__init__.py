"""Exact topological recursion and quantum curve for the first Painleve equation."""

__version__ = "0.1.0"
