"""Workbench for automatic presentations of well-orderings, ordinal
notations in Cantor normal form, and fast-growing hierarchies."""

__version__ = "0.1.0"
