"""
Level statistics across the tilt
================================

Gap ratios and unfolded spacings for a weak, a moderate and a strong tilt.
Moderate tilts look like random matrices; strong tilts look uncorrelated.
"""
import numpy as np

from xxzeth import CouplingProfile, SectorSpec, build_hamiltonian, build_symmetrized_basis, diagonalize
from xxzeth.spectral import (R_GOE, R_POISSON, ks_distance, poisson_cdf, r_statistics, spacing_distribution,
                             unfold, wigner_dyson_cdf)

N = 14
basis = build_symmetrized_basis(SectorSpec.half_filling(N))
print(f"N={N}, sector dimension {basis.dimension}")
print(f"reference <r>: GOE {R_GOE}, Poisson {R_POISSON:.4f}\n")

# %%
for theta in (0.05, 1.0, 8.0):
    H = build_hamiltonian(CouplingProfile(N, 1.0, theta), basis)
    levels = diagonalize(H, want_vectors=False)
    r = r_statistics(levels)
    u = unfold(levels)
    print(f"theta={theta:5}: <r>={r.mean:.4f}  KS(WD)={ks_distance(u.spacings, wigner_dyson_cdf):.3f}"
          f"  KS(Poisson)={ks_distance(u.spacings, poisson_cdf):.3f}")

# %%
# A coarse text histogram of P(s) in the chaotic regime.
H = build_hamiltonian(CouplingProfile(N, 1.0, 1.0), basis)
hist = spacing_distribution(unfold(diagonalize(H, want_vectors=False)), bin_width=0.25)
for left, d in zip(hist.bin_edges[:-1], hist.densities):
    print(f"{left:4.2f} {'#' * int(round(40 * d))}")
