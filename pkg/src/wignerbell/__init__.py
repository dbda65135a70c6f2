"""Positive Wigner functions, sign-of-quadrature Bell tests and the
entangled-ancilla transformations that let them violate CHSH."""
from ._accel import BACKEND
from .errors import InvalidArgument, NonDiagonalState

__version__ = "0.1.0"
__all__ = ["BACKEND", "InvalidArgument", "NonDiagonalState"]
