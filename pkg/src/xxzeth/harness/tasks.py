"""Pipelines behind each CLI task.

Each task writes CSV payloads plus a ``manifest.json`` into its own run
directory.  The directory name is derived from the configuration, so
re-running an identical config overwrites the same files with identical
bytes (only the manifest's timestamp and wall time change).
"""
from __future__ import annotations

import hashlib
import json
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .. import __version__
from ..basis import SectorSpec, build_symmetrized_basis
from ..dynamics import QuenchConfig, fit_gaussian_decay, half_filled_sector, quench_campaign
from ..eth import (diagonal_stats, eigenbasis_elements, element_histograms, gamma_ratio,
                   offdiagonal_histogram2d, offdiagonal_stats)
from ..hamiltonian import CouplingProfile, build_observable_T, build_observable_Z
from ..spectral import (ks_distance, poisson_cdf, r_statistics, spacing_distribution,
                        unfold, wigner_dyson_cdf)
from .cache import SpectrumCache
from .config import RunConfig
from .io import ResultRecord, sha256_file, write_csv
from .sweep import SweepGrid, contour_segments, moving_average, run_sweep

_MODEL = ("N", "delta", "theta", "J", "parity")
# fields that determine each task's payloads
TASK_FIELDS = {
    "spectrum": _MODEL + ("r_keep_fraction",),
    "pscan": _MODEL + ("poly_degree", "keep_fraction", "r_keep_fraction", "bin_width", "s_max"),
    "rsweep": ("J", "parity", "r_keep_fraction", "N_values", "delta_values", "theta_values",
               "contour_level", "smooth_window"),
    "eth": _MODEL + ("observables", "d_eps", "central_fraction", "d_omega", "window_fraction",
                     "omega_cut", "gamma_min_count"),
    "quench": ("N", "delta", "theta", "J", "t_min", "t_max", "n_times", "n_realizations", "cut", "seed"),
}


def config_digest(config: RunConfig) -> str:
    """Short hash of the fields that determine ``config.task``'s payloads."""
    d = {"task": config.task}
    d.update({k: getattr(config, k) for k in TASK_FIELDS[config.task]})
    return hashlib.sha256(json.dumps(d, sort_keys=True, default=str).encode()).hexdigest()[:10]


def run_name(config: RunConfig) -> str:
    c = config
    if c.task == "rsweep":
        label = f"N{'-'.join(map(str, c.N_values))}"
    else:
        label = f"N{c.N}_D{c.delta:g}_th{c.theta:g}"
    return f"{c.task}_{label}_{config_digest(config)}"


def _profile(c: RunConfig) -> CouplingProfile:
    return CouplingProfile(c.N, c.delta, c.theta, c.J)


def _sector(c: RunConfig) -> SectorSpec:
    return SectorSpec.half_filling(c.N, c.parity)


def _task_spectrum(c, run_dir, cache):
    spec = cache.get(_profile(c), _sector(c), want_vectors=False)
    E = spec.eigenvalues
    write_csv(run_dir / "eigenvalues.csv", ["index", "energy"], [np.arange(E.size), E])
    r = r_statistics(spec, c.r_keep_fraction)
    return {"eigenvalues": "eigenvalues.csv"}, {
        "dimension": int(E.size), "E_min": float(E[0]), "E_max": float(E[-1]), "r_mean": r.mean,
    }


def _task_pscan(c, run_dir, cache):
    spec = cache.get(_profile(c), _sector(c), want_vectors=False)
    u = unfold(spec, c.poly_degree, c.keep_fraction)
    h = spacing_distribution(u, c.bin_width, c.s_max)
    r = r_statistics(spec, c.r_keep_fraction)
    write_csv(run_dir / "spacing_histogram.csv", ["bin_left", "bin_right", "density"],
              [h.bin_edges[:-1], h.bin_edges[1:], h.densities])
    write_csv(run_dir / "r_values.csv", ["index", "r"], [np.arange(r.r_values.size), r.r_values])
    return {"spacing_histogram": "spacing_histogram.csv", "r_values": "r_values.csv"}, {
        "dimension": int(spec.dimension), "retained_levels": int(u.unfolded.size),
        "poly_degree": int(u.poly_degree), "r_mean": r.mean, "overflow": h.overflow,
        "ks_wigner_dyson": ks_distance(u.spacings, wigner_dyson_cdf),
        "ks_poisson": ks_distance(u.spacings, poisson_cdf),
    }


def _task_rsweep(c, run_dir, cache):
    grid = SweepGrid(c.delta_values, c.theta_values, c.N_values)
    res = run_sweep(grid, c.threads, cache, c.J, c.parity, c.r_keep_fraction)
    arr = res.as_array()
    write_csv(run_dir / "table.csv", ["N", "delta", "theta", "r_mean"],
              [arr[:, 0].astype(int), arr[:, 1], arr[:, 2], arr[:, 3]])
    seg_N, seg_id, seg_d, seg_t = [], [], [], []
    sid = 0
    for N in grid.N_values:
        Z = moving_average(res.r_grid(N), c.smooth_window)
        for p, q in contour_segments(grid.theta_values, grid.delta_values, Z, c.contour_level):
            for pt in (p, q):
                seg_N.append(N)
                seg_id.append(sid)
                seg_t.append(pt[0])
                seg_d.append(pt[1])
            sid += 1
    write_csv(run_dir / "contour.csv", ["N", "segment", "delta", "theta"], [seg_N, seg_id, seg_d, seg_t])
    summary = {"points": len(grid.points()), "failed": len(res.failures),
               "failures": [[list(p), e] for p, e in res.failures],
               "contour_level": c.contour_level, "contour_segments": sid}
    if len(res.rows) == 1:
        summary["r_mean"] = res.rows[0][3]
    return {"table": "table.csv", "contour": "contour.csv"}, summary


def _observable(name, basis):
    return build_observable_T(basis) if name == "T" else build_observable_Z(basis)


def _task_eth(c, run_dir, cache):
    basis = build_symmetrized_basis(_sector(c))
    spec = cache.get(_profile(c), _sector(c), want_vectors=True)
    payloads, summary = {}, {"dimension": basis.dimension, "N": c.N}
    for name in c.observables:
        O = _observable(name, basis)
        ds = diagonal_stats(spec, O, c.d_eps, c.central_fraction)
        elements = eigenbasis_elements(spec, O)
        od = offdiagonal_stats(spec, O, None, c.window_fraction, c.d_omega, elements=elements)
        g = gamma_ratio(od, c.d_omega, c.gamma_min_count)
        gamma_full = np.full(od.coarse_variance.size, np.nan)
        gamma_full[np.searchsorted(od.bin_centers, g.centers - 1e-12)] = g.gamma
        write_csv(run_dir / f"diagonal_{name}.csv", ["eps", "O_nn"], [ds.eps, ds.values])
        write_csv(run_dir / f"micro_{name}.csv", ["eps_center", "mean", "count"],
                  [ds.micro_centers, ds.micro_means, ds.micro_counts])
        write_csv(run_dir / f"offdiagonal_{name}.csv",
                  ["omega_center", "variance", "scaled_variance", "gamma", "count"],
                  [od.bin_centers, od.coarse_variance, od.scaled_variance(), gamma_full, od.bin_counts])
        oe, ye, dens = offdiagonal_histogram2d(od, c.d_omega)
        ii, jj = np.meshgrid(np.arange(oe.size - 1), np.arange(ye.size - 1), indexing="ij")
        write_csv(run_dir / f"hist2d_{name}.csv",
                  ["omega_left", "omega_right", "log10_sq_left", "log10_sq_right", "density"],
                  [oe[ii], oe[ii + 1], ye[jj], ye[jj + 1], dens])
        payloads.update({f"diagonal_{name}": f"diagonal_{name}.csv", f"micro_{name}": f"micro_{name}.csv",
                         f"offdiagonal_{name}": f"offdiagonal_{name}.csv", f"hist2d_{name}": f"hist2d_{name}.csv"})
        entry = {"fluct_mean": ds.fluct_mean, "offdiag_samples": int(od.omega.size)}
        try:
            eh = element_histograms(od, c.omega_cut)
        except Exception as exc:  # noqa: BLE001 - too few small-omega pairs at tiny N
            entry["element_histograms"] = str(exc)
        else:
            write_csv(run_dir / f"elements_{name}.csv", ["bin_left", "bin_right", "density", "gauss_reference"],
                      [eh.edges[:-1], eh.edges[1:], eh.density, eh.gauss_reference])
            write_csv(run_dir / f"log_elements_{name}.csv",
                      ["bin_left", "bin_right", "density", "lognormal_reference"],
                      [eh.log_edges[:-1], eh.log_edges[1:], eh.log_density, eh.lognormal_reference])
            payloads[f"elements_{name}"] = f"elements_{name}.csv"
            payloads[f"log_elements_{name}"] = f"log_elements_{name}.csv"
            entry.update(ks_gauss=eh.ks_gauss, ks_lognormal=eh.ks_lognormal,
                         small_omega_samples=eh.sample_count)
        summary[name] = entry
    return payloads, summary


def _task_quench(c, run_dir, cache):
    profile = _profile(c)
    basis = half_filled_sector(c.N)
    spec = cache.get(profile, basis.spec, want_vectors=True)
    qc = QuenchConfig(profile, tuple(c.times()), c.n_realizations, c.seed, c.cut)
    res = quench_campaign(qc, (basis, spec))
    S, P = res.entropy, res.survival
    write_csv(run_dir / "entropy.csv", ["t", "S_mean", "S_stderr"], [S.times, S.mean, S.stderr])
    write_csv(run_dir / "survival.csv", ["t", "P_mean", "P_stderr"], [P.times, P.mean, P.stderr])
    edges, dens = res.ldos.histogram()
    write_csv(run_dir / "ldos.csv", ["E_left", "E_right", "weight_density"], [edges[:-1], edges[1:], dens])
    D_sector = SectorSpec.half_filling(c.N, "even").expected_dimension
    summary = {
        "dynamics_dimension": res.dimension, "sector_dimension": D_sector,
        "realizations": S.count, "S_late": S.window_mean(0.1 * c.t_max),
        "S_page": c.N / 2 * np.log(2) - 0.5, "P_late": P.window_mean(0.1 * c.t_max),
        "ldos_sigma": float(np.sqrt(res.ldos_variances.mean())), "ipr_mean": float(res.iprs.mean()),
    }
    try:
        summary["sigma_fit"] = fit_gaussian_decay(P.times, P.mean)
    except Exception as exc:  # noqa: BLE001 - grid may start too late to resolve the decay
        summary["sigma_fit"] = None
        summary["sigma_fit_error"] = str(exc)
    return {"entropy": "entropy.csv", "survival": "survival.csv", "ldos": "ldos.csv"}, summary


TASK_FUNCS = {
    "spectrum": _task_spectrum,
    "pscan": _task_pscan,
    "rsweep": _task_rsweep,
    "eth": _task_eth,
    "quench": _task_quench,
}


def run_task(config: RunConfig, cache: SpectrumCache | None = None, run_dir=None) -> ResultRecord:
    """Execute ``config.task`` and persist payloads plus manifest."""
    config.validate()
    cache = cache if cache is not None else SpectrumCache()
    run_dir = Path(run_dir) if run_dir is not None else Path(config.out) / run_name(config)
    run_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    payloads, summary = TASK_FUNCS[config.task](config, run_dir, cache)
    wall = time.perf_counter() - t0
    record = ResultRecord(
        task=config.task,
        config=config.to_dict(),
        code_version=__version__,
        wall_time=wall,
        payloads=payloads,
        summary=summary,
        run_dir=run_dir,
        checksums={k: sha256_file(run_dir / v) for k, v in payloads.items()},
        created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    record.save()
    return record
