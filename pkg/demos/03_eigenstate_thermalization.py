"""
Matrix elements of local observables
====================================

Diagonal elements of the next-nearest-neighbour hopping T, their
eigenstate-to-eigenstate fluctuations, and the Gaussianity ratio of the
off-diagonal elements near the middle of the spectrum.
"""
import numpy as np

from xxzeth import (CouplingProfile, SectorSpec, build_hamiltonian, build_observable_T,
                    build_symmetrized_basis, diagonalize)
from xxzeth.eth import diagonal_stats, gamma_ratio, offdiagonal_stats

# %%
for theta in (1.0, 8.0):
    print(f"--- delta=1, theta={theta}")
    for N in (10, 12):
        basis = build_symmetrized_basis(SectorSpec.half_filling(N))
        spec = diagonalize(build_hamiltonian(CouplingProfile(N, 1.0, theta), basis))
        T = build_observable_T(basis)
        ds = diagonal_stats(spec, T)
        od = offdiagonal_stats(spec, T)
        g = gamma_ratio(od)
        mid = (g.centers > 0.5) & (g.centers < 2.0)
        print(f"N={N:2d} D={basis.dimension:4d}  mean|dT_nn|={ds.fluct_mean:.4f}  "
              f"Gamma(0.5<w<2) median={np.median(g.gamma[mid]):.3f}  (Gaussian: {np.pi / 2:.3f})")

# %%
# Scaled variance N D |T_nm|^2 against omega for the chaotic point.
N = 12
basis = build_symmetrized_basis(SectorSpec.half_filling(N))
spec = diagonalize(build_hamiltonian(CouplingProfile(N, 1.0, 1.0), basis))
od = offdiagonal_stats(spec, build_observable_T(basis))
for w, v in list(zip(od.bin_centers, od.scaled_variance()))[:30:3]:
    print(f"omega={w:4.2f}  N D |T_nm|^2 = {v:.4f}")
