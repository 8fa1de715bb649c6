"""Exact computation of invariant bilinear differential operators on tensor
fields via singular vectors of dual jet modules."""

__version__ = "0.1.0"
