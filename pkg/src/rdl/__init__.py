"""Ramsey-type density computations on finite prefixes of edge-colored complete graphs."""

__version__ = "0.1.0"
