"""
Quenches from random product states
===================================

Entanglement growth and return probability after starting from random
half-filled product states, averaged over realizations.
"""
import numpy as np

from xxzeth import CouplingProfile
from xxzeth.dynamics import QuenchConfig, fit_gaussian_decay, quench_campaign

N = 10
times = np.concatenate([np.linspace(0.02, 1.0, 25), np.logspace(0.1, 3, 30)])

# %%
for theta in (1.0, 8.0):
    cfg = QuenchConfig(CouplingProfile(N, 0.0, theta), tuple(times), n_realizations=50, seed=1)
    res = quench_campaign(cfg)
    S, P = res.entropy, res.survival
    page = N / 2 * np.log(2) - 0.5
    print(f"theta={theta}: S(t=1)={np.interp(1.0, S.times, S.mean):.3f}  "
          f"S(late)={S.window_mean(100):.3f}  Page value={page:.3f}")
    print(f"           late P={P.window_mean(100):.4f}")
    if theta == 1.0:
        # the initial decay is Gaussian with the width of the local density of states
        sigma = np.sqrt(res.ldos_variances.mean())
        print(f"           LDOS width {sigma:.3f}, Gaussian fit of early P(t) {fit_gaussian_decay(P.times, P.mean):.3f}")
