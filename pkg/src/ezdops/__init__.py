"""Exact computation of cohomological operators on complexes of free modules
over a quotient by an exact zero divisor."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
