"""Controlled unfolding of definitions for a small dependent type theory."""

__version__ = "0.1.0"
