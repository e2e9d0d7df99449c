"""Exact tools for Ramsey arrowing, Ramsey-minimal graphs and their gadgets."""

__version__ = "0.1.0"
