"""
Symmetry sectors and the inhomogeneous XXZ Hamiltonian
======================================================

Build the even spin-inversion sector at zero magnetization, assemble the
Hamiltonian with a tilted z-z coupling, and check it against the open XX
chain solved with free fermions.
"""
from itertools import combinations
from math import comb

import numpy as np

from xxzeth import (CouplingProfile, SectorSpec, build_hamiltonian, build_symmetrized_basis,
                    coupling_at_bond, diagonalize)

# %%
# A configuration is an integer: bit i holds site i+1, a set bit is spin up.
N = 10
spec = SectorSpec.half_filling(N, "even")
basis = build_symmetrized_basis(spec)
print(f"N={N}: {basis.dimension} symmetric states (C(N, N/2)/2 = {comb(N, N // 2) // 2})")
print("first representatives:", [format(int(c), f"0{N}b") for c in basis.representatives[:4]])

# %%
# The z-z coupling grows linearly from delta - theta to delta + theta.
profile = CouplingProfile(N, delta=1.0, theta=1.0)
print("bond couplings:", np.round(profile.couplings(), 3))
print("leftmost / rightmost:", coupling_at_bond(profile, 1), coupling_at_bond(profile, N - 1))

# %%
# Dense assembly and full diagonalization.
H = build_hamiltonian(profile, basis)
spec_full = diagonalize(H)
print(f"E_min={spec_full.eigenvalues[0]:.4f}  E_max={spec_full.eigenvalues[-1]:.4f}")

# %%
# Cross-check: at delta = theta = 0 the chain maps to free fermions with
# single-particle energies 4 cos(k pi / (N + 1)).
eps = 4 * np.cos(np.arange(1, N + 1) * np.pi / (N + 1))
free = np.sort([eps[list(c)].sum() for c in combinations(range(N), N // 2)])
both = np.sort(np.concatenate([
    np.linalg.eigvalsh(build_hamiltonian(CouplingProfile(N, 0.0, 0.0),
                                         build_symmetrized_basis(SectorSpec.half_filling(N, p))).entries)
    for p in ("even", "odd")
]))
print("largest deviation from free fermions:", np.abs(both - free).max())
