"""Exact computation in quantum matrix algebras and their Fock representation."""

from .scalars import ONE, Q, QINV, ZERO, NotDivisible, Scalar

__version__ = "0.1.0"

__all__ = ["Scalar", "NotDivisible", "ZERO", "ONE", "Q", "QINV", "__version__"]
