"""Per-figure CSV bundles assembled from stored run records.

``figure_requirements`` lists the runs a figure needs; ``emit_figure_data``
collects them from a record set and writes one directory of CSVs per
figure.  Plotting is left to external tools.

Bundles and their files:

    Fig2   ps_theta<θ>.csv (bin_left, bin_right, density), one per panel;
           reference_poisson.csv, reference_wigner_dyson.csv (s, density)
    ratio  r_vs_theta.csv (N, delta, theta, r_mean)
    Fig3   heatmap.csv (N, delta, theta, r_mean); contour.csv (N, segment, delta, theta)
    Fig4   diagonal_<O>_N<N>_th<θ>.csv, micro_<O>_N<N>_th<θ>.csv;
           fluct_scaling.csv (theta, observable, N, D, ND, fluct_mean)
    Fig5   offdiagonal_<O>_N<N>_th<θ>.csv (omega_center, variance, scaled_variance, count);
           hist2d_<O>_N<N>_th<θ>.csv
    Fig6   gamma_<O>_N<N>_th<θ>.csv (omega_center, gamma, count)
    Fig7   elements_<O>_..., log_elements_<O>_... histogram tables
    Fig8   entropy_N<N>_D<Δ>_th<θ>.csv (t, S_mean, S_stderr); page.csv (N, S_page)
    Fig9   survival.csv (theta, t, P_mean, P_stderr)
"""
from __future__ import annotations

import shutil
from pathlib import Path

import numpy as np

from ..errors import ConfigError
from ..spectral import poisson_pdf, wigner_dyson_pdf
from .config import RunConfig
from .io import ResultRecord, read_csv, write_csv
from .tasks import config_digest, run_name

FIG2_THETAS = (0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
RATIO_THETAS = tuple(float(x) for x in np.round(np.concatenate([np.geomspace(0.01, 1, 12), np.linspace(1.5, 10, 18)]), 6))
FIG3_DELTAS = tuple(float(x) for x in np.linspace(0.0, 3.0, 7))
FIG3_THETAS = tuple(float(x) for x in np.linspace(0.0, 10.0, 11))
FIG9_THETAS = tuple(float(x) for x in range(1, 10))
FIGURE_IDS = ("Fig2", "ratio", "Fig3", "Fig4", "Fig5", "Fig6", "Fig7", "Fig8", "Fig9")


class MissingRecordsError(ConfigError):
    """Some runs a figure depends on have not been produced yet."""


def figure_requirements(figure_id: str, N: int = 12, N_values=None, base: RunConfig | None = None):
    """Run configs whose records ``figure_id`` consumes."""
    base = base or RunConfig()
    N_values = tuple(N_values) if N_values else (N,)
    if figure_id == "Fig2":
        return [base.replace(task="pscan", N=N, delta=1.0, theta=t) for t in FIG2_THETAS]
    if figure_id == "ratio":
        return [base.replace(task="rsweep", N=N, N_values=N_values, delta_values=(0.5,),
                             theta_values=RATIO_THETAS)]
    if figure_id == "Fig3":
        return [base.replace(task="rsweep", N=N, N_values=N_values, delta_values=FIG3_DELTAS,
                             theta_values=FIG3_THETAS)]
    if figure_id in ("Fig4", "Fig5", "Fig6"):
        return [base.replace(task="eth", N=n, delta=1.0, theta=t) for t in (1.0, 8.0) for n in N_values]
    if figure_id == "Fig7":
        return [base.replace(task="eth", N=N, delta=d, theta=t) for d, t in ((0.0, 1.0), (1.0, 1.0), (0.0, 8.0))]
    if figure_id == "Fig8":
        chaotic = [base.replace(task="quench", N=n, delta=0.0, theta=1.0) for n in N_values]
        slow = [base.replace(task="quench", N=N, delta=d, theta=t) for d, t in ((0.0, 8.0), (2.0, 0.0))]
        return chaotic + [c for c in slow if c not in chaotic]
    if figure_id == "Fig9":
        return [base.replace(task="quench", N=N, delta=0.0, theta=t) for t in FIG9_THETAS]
    raise ConfigError(f"unknown figure {figure_id!r}; choose from {FIGURE_IDS}")


def match_records(records, requirements):
    """Pair each requirement with a record of identical payload-relevant config."""
    by_digest = {}
    for rec in records:
        try:
            by_digest[config_digest(RunConfig.from_dict(rec.config))] = rec
        except ConfigError:
            continue
    found, missing = [], []
    for req in requirements:
        rec = by_digest.get(config_digest(req))
        if rec is None:
            missing.append(run_name(req))
        else:
            found.append((req, rec))
    return found, missing


def _tag(x: float) -> str:
    return f"{x:g}"


def _copy(rec: ResultRecord, payload: str, dest: Path) -> Path:
    shutil.copyfile(rec.payload_path(payload), dest)
    return dest


def _fig2(pairs, out):
    files = []
    for req, rec in pairs:
        files.append(_copy(rec, "spacing_histogram", out / f"ps_theta{_tag(req.theta)}.csv"))
    s = np.linspace(0.0, 4.0, 401)
    files.append(write_csv(out / "reference_poisson.csv", ["s", "density"], [s, poisson_pdf(s)]))
    files.append(write_csv(out / "reference_wigner_dyson.csv", ["s", "density"], [s, wigner_dyson_pdf(s)]))
    return files


def _ratio(pairs, out):
    (_, rec), = pairs
    t = read_csv(rec.payload_path("table"))
    return [write_csv(out / "r_vs_theta.csv", ["N", "delta", "theta", "r_mean"],
                      [t["N"].astype(int), t["delta"], t["theta"], t["r_mean"]])]


def _fig3(pairs, out):
    (_, rec), = pairs
    return [_copy(rec, "table", out / "heatmap.csv"), _copy(rec, "contour", out / "contour.csv")]


def _eth_name(kind, obs, req):
    return f"{kind}_{obs}_N{req.N}_D{_tag(req.delta)}_th{_tag(req.theta)}.csv"


def _fig4(pairs, out):
    files = []
    th, ob, Ns, Ds, flu = [], [], [], [], []
    for req, rec in pairs:
        for obs in req.observables:
            files.append(_copy(rec, f"diagonal_{obs}", out / _eth_name("diagonal", obs, req)))
            files.append(_copy(rec, f"micro_{obs}", out / _eth_name("micro", obs, req)))
            th.append(req.theta)
            ob.append(obs)
            Ns.append(req.N)
            Ds.append(rec.summary["dimension"])
            flu.append(rec.summary[obs]["fluct_mean"])
    Ns, Ds = np.array(Ns), np.array(Ds)
    files.append(write_csv(out / "fluct_scaling.csv", ["theta", "observable", "N", "D", "ND", "fluct_mean"],
                           [th, ob, Ns, Ds, Ns * Ds, flu]))
    return files


def _fig5(pairs, out):
    files = []
    for req, rec in pairs:
        for obs in req.observables:
            t = read_csv(rec.payload_path(f"offdiagonal_{obs}"))
            files.append(write_csv(out / _eth_name("offdiagonal", obs, req),
                                   ["omega_center", "variance", "scaled_variance", "count"],
                                   [t["omega_center"], t["variance"], t["scaled_variance"], t["count"].astype(int)]))
            files.append(_copy(rec, f"hist2d_{obs}", out / _eth_name("hist2d", obs, req)))
    return files


def _fig6(pairs, out):
    files = []
    for req, rec in pairs:
        for obs in req.observables:
            t = read_csv(rec.payload_path(f"offdiagonal_{obs}"))
            ok = np.isfinite(t["gamma"])
            files.append(write_csv(out / _eth_name("gamma", obs, req), ["omega_center", "gamma", "count"],
                                   [t["omega_center"][ok], t["gamma"][ok], t["count"][ok].astype(int)]))
    return files


def _fig7(pairs, out):
    files = []
    for req, rec in pairs:
        for obs in req.observables:
            for kind in ("elements", "log_elements"):
                key = f"{kind}_{obs}"
                if key in rec.payloads:
                    files.append(_copy(rec, key, out / _eth_name(kind, obs, req)))
    return files


def _fig8(pairs, out):
    files = []
    pages = {}
    for req, rec in pairs:
        name = f"entropy_N{req.N}_D{_tag(req.delta)}_th{_tag(req.theta)}.csv"
        files.append(_copy(rec, "entropy", out / name))
        pages[req.N] = req.N / 2 * np.log(2) - 0.5
    Ns = sorted(pages)
    files.append(write_csv(out / "page.csv", ["N", "S_page"], [Ns, [pages[n] for n in Ns]]))
    return files


def _fig9(pairs, out):
    th, t, P, E = [], [], [], []
    for req, rec in pairs:
        d = read_csv(rec.payload_path("survival"))
        th.append(np.full(d["t"].size, req.theta))
        t.append(d["t"])
        P.append(d["P_mean"])
        E.append(d["P_stderr"])
    return [write_csv(out / "survival.csv", ["theta", "t", "P_mean", "P_stderr"],
                      [np.concatenate(th), np.concatenate(t), np.concatenate(P), np.concatenate(E)])]


_ASSEMBLERS = {"Fig2": _fig2, "ratio": _ratio, "Fig3": _fig3, "Fig4": _fig4, "Fig5": _fig5,
               "Fig6": _fig6, "Fig7": _fig7, "Fig8": _fig8, "Fig9": _fig9}


def emit_figure_data(records, figure_id: str, out_dir, N: int = 12, N_values=None,
                     base: RunConfig | None = None) -> list[Path]:
    """Write the CSV bundle of ``figure_id`` under ``out_dir/figure_id``.

    Raises :class:`MissingRecordsError` naming every absent run.
    """
    reqs = figure_requirements(figure_id, N, N_values, base)
    pairs, missing = match_records(records, reqs)
    if missing:
        raise MissingRecordsError([f"missing record {m}" for m in missing])
    out = Path(out_dir) / figure_id
    out.mkdir(parents=True, exist_ok=True)
    return _ASSEMBLERS[figure_id](pairs, out)
