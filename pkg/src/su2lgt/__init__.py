"""Desk-scale toolkit for heavy-quark energy loss in 1+1D SU(2) lattice gauge theory."""

from .lattice import LatticeSpec
from .pauli import PauliString, PauliSum, StateVector

__all__ = ["LatticeSpec", "PauliString", "PauliSum", "StateVector"]
__version__ = "0.1.0"
