"""Exact diagonalization of the XXZ chain with a linear z-z coupling gradient.

Symmetry-resolved sector bases, level statistics, eigenstate matrix-element
statistics and quench dynamics.
"""
__version__ = "0.1.0"

from .basis import SectorSpec, SymmetrizedBasis, build_symmetrized_basis, enumerate_sz_sector, spin_inversion
from .errors import CapacityError, ConfigError, DomainError, EigensolverError, XXZError
from .hamiltonian import (CouplingProfile, OperatorMatrix, apply_hamiltonian, build_hamiltonian,
                          build_observable_T, build_observable_Z, coupling_at_bond)
from .spectral import Spectrum, diagonalize, r_statistics, spacing_distribution, unfold

__all__ = [
    "CapacityError", "ConfigError", "CouplingProfile", "DomainError", "EigensolverError",
    "OperatorMatrix", "SectorSpec", "Spectrum", "SymmetrizedBasis", "XXZError",
    "apply_hamiltonian", "build_hamiltonian", "build_observable_T", "build_observable_Z",
    "build_symmetrized_basis", "coupling_at_bond", "diagonalize", "enumerate_sz_sector",
    "r_statistics", "spacing_distribution", "spin_inversion", "unfold",
]
