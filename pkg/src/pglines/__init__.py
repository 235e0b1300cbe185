"""Multisets of lines in PG(r-1, 2) with few lines per hyperplane."""

__version__ = "0.1.0"
