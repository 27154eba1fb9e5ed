"""Acceptance criteria at desk-scale system sizes.

Each test prints one PASS/FAIL line; the full list is repeated in the
pytest terminal summary.
"""
from math import comb

import numpy as np
import pytest

from oracles import free_fermion_levels, full_xxz
from xxzeth.basis import SectorSpec, build_symmetrized_basis
from xxzeth.dynamics import (QuenchConfig, default_times, evolve, fit_gaussian_decay, product_state_vector,
                             quench_campaign, quench_spectrum)
from xxzeth.eth import diagonal_stats, eigenbasis_elements, gamma_ratio, offdiagonal_stats
from xxzeth.hamiltonian import CouplingProfile, build_hamiltonian, build_observable_T
from xxzeth.harness.cache import SpectrumCache
from xxzeth.harness.config import RunConfig
from xxzeth.harness.tasks import run_task
from xxzeth.spectral import (R_GOE, R_POISSON, ks_distance, poisson_cdf, r_statistics, sample_goe_levels,
                             sample_poisson_levels, unfold, wigner_dyson_cdf)

pytestmark = [pytest.mark.acceptance, pytest.mark.slow]

CACHE = SpectrumCache()


def sector(N, parity="even"):
    return SectorSpec.half_filling(N, parity)


def spectrum(N, delta, theta, vectors=False):
    return CACHE.get(CouplingProfile(N, delta, theta), sector(N), want_vectors=vectors)


def test_1_sector_dimension(report):
    dims = {N: build_symmetrized_basis(sector(N)).dimension for N in range(4, 21, 2)}
    ok = all(d == comb(N, N // 2) // 2 for N, d in dims.items()) and dims[20] == 92378
    assert report(1, ok, f"even-sector dimensions for N=4..20 match C(N,N/2)/2; N=20 -> {dims[20]}")


def test_2_oracle_equivalence(report):
    worst_full = 0.0
    for N in (4, 6, 8, 10):
        for delta, theta in ((1.0, 1.0), (0.5, 3.0), (-1.2, 8.0)):
            p = CouplingProfile(N, delta, theta)
            parts = []
            for n_up in range(N + 1):
                specs = [SectorSpec(N, n_up, q) for q in ("even", "odd")] if 2 * n_up == N else [SectorSpec(N, n_up)]
                for s in specs:
                    parts.append(np.linalg.eigvalsh(build_hamiltonian(p, build_symmetrized_basis(s)).entries))
            union = np.sort(np.concatenate(parts))
            worst_full = max(worst_full, np.max(np.abs(union - np.linalg.eigvalsh(full_xxz(N, 1.0, delta, theta)))))
    worst_ff = 0.0
    for N in (4, 6, 8, 10, 12):
        p = CouplingProfile(N, 0.0, 0.0)
        for n_up in range(N + 1):
            specs = [SectorSpec(N, n_up, q) for q in ("even", "odd")] if 2 * n_up == N else [SectorSpec(N, n_up)]
            got = np.sort(np.concatenate([np.linalg.eigvalsh(build_hamiltonian(p, build_symmetrized_basis(s)).entries)
                                          for s in specs]))
            worst_ff = max(worst_ff, np.max(np.abs(got - free_fermion_levels(N, n_up))))
    ok = worst_full < 1e-10 and worst_ff < 1e-10
    assert report(2, ok, f"max level error vs full space {worst_full:.1e}, vs free fermions {worst_ff:.1e} (tol 1e-10)")


def test_3_level_statistics_crossover(report):
    r1 = r_statistics(spectrum(14, 1.0, 1.0)).mean
    r8 = r_statistics(spectrum(14, 1.0, 8.0)).mean
    rng = np.random.default_rng(3)
    r_goe = np.mean([r_statistics(sample_goe_levels(rng, 2000)).mean for _ in range(10)])
    r_ps = r_statistics(sample_poisson_levels(rng, 100_000)).mean
    ok = (r1 >= 0.50 and r8 <= 0.45 and r1 - r8 >= 0.08
          and abs(r_goe - R_GOE) <= 0.005 and abs(r_ps - R_POISSON) <= 0.005)
    assert report(3, ok, f"N=14 <r>(theta=1)={r1:.4f} <r>(theta=8)={r8:.4f} diff={r1 - r8:.4f}; "
                         f"synthetic GOE {r_goe:.4f}, Poisson {r_ps:.4f}")


def test_4_spacing_distribution_shape(report):
    N = 16
    ks_wd = ks_distance(unfold(spectrum(N, 1.0, 0.5)).spacings, wigner_dyson_cdf)
    ks_p = ks_distance(unfold(spectrum(N, 1.0, 8.0)).spacings, poisson_cdf)
    ok = ks_wd < 0.06 and ks_p < 0.08
    assert report(4, ok, f"N={N}: KS to Wigner-Dyson at theta=0.5 {ks_wd:.4f} (<0.06), "
                         f"KS to Poisson at theta=8 {ks_p:.4f} (<0.08)")


def test_5_diagonal_fluctuation_scaling(report):
    xs, ys = [], []
    for N in (10, 12, 14):
        basis = build_symmetrized_basis(sector(N))
        ds = diagonal_stats(spectrum(N, 1.0, 1.0, vectors=True), build_observable_T(basis))
        xs.append(np.log(N * basis.dimension))
        ys.append(np.log(ds.fluct_mean))
    slope = np.polyfit(xs, ys, 1)[0]
    ok = -0.65 <= slope <= -0.35
    values = ", ".join(f"{np.exp(y):.4f}" for y in ys)
    assert report(5, ok, f"slope of log mean|dT_nn| vs log(N D) = {slope:.3f} (band [-0.65, -0.35]); "
                         f"N=10,12,14 -> {values}")


def _scaled_variance(N):
    basis = build_symmetrized_basis(sector(N))
    od = offdiagonal_stats(spectrum(N, 1.0, 1.0, vectors=True), build_observable_T(basis))
    return od.bin_centers, od.scaled_variance()


def test_6_offdiagonal_variance_collapse(report):
    c12, v12 = _scaled_variance(12)
    c14, v14 = _scaled_variance(14)
    n = min(c12.size, c14.size)
    sel = (c12[:n] >= 0.2) & (c12[:n] <= 2.0)
    ratio = v12[:n][sel] / v14[:n][sel]
    ok = bool(np.all(np.abs(ratio - 1.0) <= 0.2))
    band_mean = np.mean(v12[:n][sel]) / np.mean(v14[:n][sel])
    assert report(6, ok, f"N D |T_nm|^2 ratio N=12/N=14 per 0.1-bin on [0.2, 2]: "
                         f"min {ratio.min():.2f} max {ratio.max():.2f} (need within 0.8..1.2); "
                         f"band-averaged ratio {band_mean:.2f}")


def _gamma_in_band(theta):
    basis = build_symmetrized_basis(sector(14))
    od = offdiagonal_stats(spectrum(14, 1.0, theta, vectors=True), build_observable_T(basis))
    g = gamma_ratio(od)
    sel = (g.centers >= 0.5) & (g.centers <= 2.0)
    return g.gamma[sel]


def test_7_gaussianity_ratio(report):
    lo, hi = np.pi / 2 - 0.25, np.pi / 2 + 0.25
    g1 = _gamma_in_band(1.0)
    g8 = _gamma_in_band(8.0)
    inside1 = np.all((g1 >= lo) & (g1 <= hi))
    outside8 = np.mean((g8 < lo) | (g8 > hi))
    ok = bool(inside1 and outside8 >= 0.5)
    assert report(7, ok, f"N=14 Gamma_T on [0.5, 2]: theta=1 range [{g1.min():.3f}, {g1.max():.3f}] "
                         f"in [{lo:.3f}, {hi:.3f}]; theta=8 outside band in {outside8:.0%} of bins")


@pytest.fixture(scope="module")
def chaotic_quench():
    profile = CouplingProfile(12, 0.0, 1.0)
    times = np.concatenate([np.linspace(0.01, 1.0, 60), default_times(64)[np.log10(default_times(64)) > 0.01]])
    return quench_campaign(QuenchConfig(profile, tuple(times), n_realizations=200, seed=2024),
                           quench_spectrum(profile))


def test_8_page_saturation(report, chaotic_quench):
    S = chaotic_quench.entropy
    s_late = S.window_mean(100.0, 1000.0)
    page = 6 * np.log(2) - 0.5
    ok = page - 0.5 <= s_late <= page
    assert report(8, ok, f"N=12, 200 realizations: late-time S = {s_late:.4f} in "
                         f"[{page - 0.5:.4f}, {page:.4f}]")


def test_9_survival_probability(report, chaotic_quench):
    res = chaotic_quench
    P = res.survival
    sigma_ldos = float(np.sqrt(res.ldos_variances.mean()))
    sigma_fit = fit_gaussian_decay(P.times, P.mean)
    plateau = P.window_mean(100.0, 1000.0)
    D = sector(12).expected_dimension
    fit_ok = abs(sigma_fit / sigma_ldos - 1.0) <= 0.05
    plateau_ok = 1 / 3 <= plateau * D <= 3
    assert report(9, fit_ok and plateau_ok,
                  f"sigma_fit/sigma_LDOS = {sigma_fit / sigma_ldos:.4f}; late P*D = {plateau * D:.2f} "
                  f"(D={D}; with the Sz=0 dimension {res.dimension}: {plateau * res.dimension:.2f})")


def test_10_property_suites(report, tmp_path):
    # norm and energy conservation
    profile = CouplingProfile(10, 0.5, 1.0)
    basis, spec = quench_spectrum(profile)
    H = build_hamiltonian(profile, basis).entries
    psi = evolve(spec, product_state_vector(basis, int(basis.representatives[40])), np.linspace(0, 500, 51))
    norm_err = np.max(np.abs(np.linalg.norm(psi, axis=0) - 1.0))
    e = np.real(np.einsum("it,ij,jt->t", psi.conj(), H, psi))
    energy_err = np.max(np.abs(e - e[0])) / abs(e[0])

    # trace and Frobenius conservation
    b10 = build_symmetrized_basis(sector(10))
    T = build_observable_T(b10)
    M = eigenbasis_elements(spectrum(10, 1.0, 1.0, vectors=True), T)
    trace_err = abs(np.trace(M) - np.trace(T.entries))
    frob_err = abs(np.sum(M**2) - np.sum(T.entries**2)) / np.sum(T.entries**2)

    # exact affine invariance of gap ratios (dyadic scale, integer shift)
    E = np.round(np.sort(np.random.default_rng(0).normal(size=2000)) * 2**30) / 2**30
    affine_ok = np.array_equal(r_statistics(E).r_values, r_statistics(0.25 * E + 3.0).r_values)

    # theta -> -theta
    a = spectrum(12, 0.7, 2.5)
    b = CACHE.get(CouplingProfile(12, 0.7, -2.5), sector(12))
    refl_err = np.max(np.abs(a.eigenvalues - b.eigenvalues))

    # byte-identical reruns
    cfg = RunConfig(task="quench", N=8, delta=0.0, n_realizations=16, seed=11)
    r1 = run_task(cfg.replace(out=str(tmp_path / "a")))
    r2 = run_task(cfg.replace(out=str(tmp_path / "b")))
    same = all(r1.payload_path(k).read_bytes() == r2.payload_path(k).read_bytes() for k in r1.payloads)

    ok = (norm_err <= 1e-9 and energy_err <= 1e-9 and trace_err <= 1e-8 and frob_err <= 1e-8
          and affine_ok and refl_err <= 1e-10 and same)
    assert report(10, ok, f"norm {norm_err:.1e}, energy {energy_err:.1e}, trace {trace_err:.1e}, "
                          f"Frobenius {frob_err:.1e}, affine exact={affine_ok}, theta reflection {refl_err:.1e}, "
                          f"byte-identical reruns={same}")
