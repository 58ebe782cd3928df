"""Norm-parallelism and Birkhoff-James orthogonality for complex matrices."""

__version__ = "0.1.0"
