"""Exact Hochschild (co)homology, Tamarkin-Tsygan calculi and BV structures."""

__version__ = "0.1.0"
