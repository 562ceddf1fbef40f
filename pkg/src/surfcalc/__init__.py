"""Exact computations on surface singularities and rank-one log del Pezzo surfaces."""
from .errors import SurfcalcError

__version__ = "0.1.0"

__all__ = ["SurfcalcError", "__version__"]
