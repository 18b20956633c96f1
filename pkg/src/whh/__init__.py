"""Weighted Hermite-Hadamard inequalities and weighted logarithmic means for
scalars, convex grid functions and symmetric positive-definite matrices."""
from .eigen import EigenSolverError
from .measures import Weight, SubInterval
from .quadrature import QuadratureError, QuadratureRule

__version__ = "0.1.0"

__all__ = ["EigenSolverError", "QuadratureError", "QuadratureRule", "SubInterval", "Weight", "__version__"]
