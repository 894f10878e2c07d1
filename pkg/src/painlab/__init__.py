"""Numerical laboratory for Painleve equations, their linear pairs and Backlund lattices."""

from .numkit import KERNEL

__version__ = "0.1.0"
__all__ = ["KERNEL", "__version__"]
