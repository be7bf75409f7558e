"""Spherical functions, L^p exponents and spectral projector kernels on symmetric spaces."""

from .core import BACKEND
from .rootsys import build_catalog, get_space

__version__ = "0.1.0"

__all__ = ["BACKEND", "build_catalog", "get_space", "__version__"]
