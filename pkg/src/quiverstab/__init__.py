"""Exact stability, Hilbert-Mumford weights and cycle-trace invariants for
augmented quiver representations."""

from .exact import QQ, Field, Matrix, Mod, RationalPolynomial
from .quiver import Arrow, OrientedCycle, Quiver, Representation, SubspaceTuple

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "Field",
    "Matrix",
    "Mod",
    "RationalPolynomial",
    "Arrow",
    "OrientedCycle",
    "Quiver",
    "Representation",
    "SubspaceTuple",
]
