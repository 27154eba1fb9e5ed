"""Matrix elements of observables in the energy eigenbasis.

Diagonal elements are studied against the normalized energy density
``eps_n = (E_n - E_min) / (E_max - E_min)``; off-diagonal elements are
collected for eigenpairs whose mean energy lies in a narrow window around
the middle of the spectrum and binned in the energy difference ``omega``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .errors import DomainError
from .hamiltonian import OperatorMatrix
from .spectral import Spectrum, central_window, ks_distance


@dataclass
class DiagonalStats:
    eps: np.ndarray
    values: np.ndarray
    micro_centers: np.ndarray
    micro_means: np.ndarray
    micro_counts: np.ndarray
    fluct_mean: float

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.eps, self.values])

    @property
    def micro_curve(self) -> np.ndarray:
        return np.column_stack([self.micro_centers, self.micro_means])


@dataclass
class OffDiagonalStats:
    omega: np.ndarray
    values: np.ndarray
    bin_edges: np.ndarray
    coarse_variance: np.ndarray
    bin_counts: np.ndarray
    window: tuple[float, float]
    dimension: int
    N: int | None = None
    dropped_degenerate: int = 0
    gamma_curve: "GammaCurve | None" = field(default=None, repr=False)

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    def scaled_variance(self) -> np.ndarray:
        """N * D * mean |O_nm|^2 per omega bin (NaN for empty bins)."""
        if self.N is None:
            raise DomainError("chain length unknown; cannot rescale")
        return self.N * self.dimension * self.coarse_variance


@dataclass
class GammaCurve:
    centers: np.ndarray
    gamma: np.ndarray
    counts: np.ndarray
    reliable: np.ndarray


@dataclass
class ElementHistograms:
    edges: np.ndarray
    density: np.ndarray
    gauss_reference: np.ndarray
    log_edges: np.ndarray
    log_density: np.ndarray
    lognormal_reference: np.ndarray
    sample_count: int
    zeros_excluded: int
    ks_gauss: float
    ks_lognormal: float


def _need_vectors(spec: Spectrum):
    if spec.eigenvectors is None:
        raise DomainError("eigenvectors are required for matrix-element statistics")


def _matrix(O):
    return O.entries if isinstance(O, OperatorMatrix) else np.asarray(O, dtype=float)


def _N_of(O):
    return O.basis.N if isinstance(O, OperatorMatrix) else None


def eigenbasis_elements(spec: Spectrum, O) -> np.ndarray:
    """Full matrix V^T O V of an observable in the eigenbasis."""
    _need_vectors(spec)
    V = spec.eigenvectors
    return V.T @ (_matrix(O) @ V)


def energy_density(E: np.ndarray) -> np.ndarray:
    return (E - E[0]) / (E[-1] - E[0])


def diagonal_stats(spec: Spectrum, O, window: float = 0.01,
                   central_fraction: float = 0.2) -> DiagonalStats:
    """Eigenstate expectation values, microcanonical curve and fluctuations.

    The microcanonical curve averages O_nn over disjoint windows of width
    ``window`` in eps anchored at eps = 0 (eps = 1 belongs to the last one).
    ``fluct_mean`` is the mean |O_nn - O_{n+1,n+1}| over the central
    ``central_fraction`` of eigenstates.
    """
    _need_vectors(spec)
    V = spec.eigenvectors
    O_nn = np.einsum("in,in->n", V, _matrix(O) @ V)
    E = spec.eigenvalues
    eps = energy_density(E)
    n_bins = int(np.ceil(1.0 / window - 1e-9))
    idx = np.minimum((eps / window).astype(int), n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    sums = np.bincount(idx, weights=O_nn, minlength=n_bins)
    filled = counts > 0
    centers = (np.arange(n_bins) + 0.5) * window
    kept = O_nn[central_window(E.size, central_fraction)]
    if kept.size < 2:
        raise DomainError("central window holds fewer than two eigenstates")
    fluct = float(np.mean(np.abs(np.diff(kept))))
    return DiagonalStats(eps, O_nn, centers[filled], sums[filled] / counts[filled],
                         counts[filled], fluct)


def offdiagonal_stats(spec: Spectrum, O, center: float | None = None,
                      width_fraction: float = 0.075, d_omega: float = 0.1,
                      elements: np.ndarray | None = None) -> OffDiagonalStats:
    """Off-diagonal elements O_nm (n < m) with mean energy near ``center``.

    ``center`` defaults to the midpoint of the spectrum; the window width is
    ``width_fraction`` times the bandwidth.  Pairs with zero energy
    difference are dropped and counted.  ``elements`` may pass a
    precomputed eigenbasis matrix.
    """
    E = spec.eigenvalues
    if elements is None:
        elements = eigenbasis_elements(spec, O)
    bandwidth = E[-1] - E[0]
    if center is None:
        center = 0.5 * (E[0] + E[-1])
    width = width_fraction * bandwidth
    half = 0.5 * width
    D = E.size
    n_idx, m_idx = [], []
    for n in range(D - 1):
        # E sorted, so members m > n of the window form one contiguous run
        lo = np.searchsorted(E, 2 * (center - half) - E[n], side="left")
        hi = np.searchsorted(E, 2 * (center + half) - E[n], side="right")
        lo = max(lo, n + 1)
        if hi > lo:
            m = np.arange(lo, hi)
            n_idx.append(np.full(m.size, n))
            m_idx.append(m)
    if not n_idx:
        raise DomainError("no eigenpairs inside the energy window")
    n_idx = np.concatenate(n_idx)
    m_idx = np.concatenate(m_idx)
    omega = E[m_idx] - E[n_idx]
    positive = omega > 0
    dropped = int((~positive).sum())
    omega = omega[positive]
    values = elements[n_idx[positive], m_idx[positive]]
    if omega.size == 0:
        raise DomainError("energy window holds only degenerate pairs")
    edges, var, counts = _coarse_grain(omega, values**2, d_omega)
    return OffDiagonalStats(omega, values, edges, var, counts, (float(center), float(width)),
                            D, _N_of(O), dropped)


def _omega_edges(omega, d_omega):
    n_bins = int(np.floor(omega.max() / d_omega)) + 1
    return np.arange(n_bins + 1) * d_omega


def _coarse_grain(omega, y, d_omega):
    edges = _omega_edges(omega, d_omega)
    idx = np.minimum((omega / d_omega).astype(int), edges.size - 2)
    counts = np.bincount(idx, minlength=edges.size - 1)
    sums = np.bincount(idx, weights=y, minlength=edges.size - 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return edges, mean, counts


def gamma_of_samples(x) -> float:
    """mean(x^2) / mean(|x|)^2; equals pi/2 for zero-mean Gaussian data."""
    x = np.abs(np.asarray(x, dtype=float))
    if x.size == 0:
        raise DomainError("no samples")
    return float(np.mean(x * x) / np.mean(x) ** 2)


def gamma_ratio(stats: OffDiagonalStats, d_omega: float | None = None,
                min_count: int = 50) -> GammaCurve:
    """Per-bin ratio mean|O|^2 / (mean|O|)^2 across omega.

    Empty bins are omitted; bins with fewer than ``min_count`` samples are
    kept but marked unreliable.
    """
    if d_omega is None:
        d_omega = float(stats.bin_edges[1] - stats.bin_edges[0])
    x = np.abs(stats.values)
    edges = _omega_edges(stats.omega, d_omega)
    idx = np.minimum((stats.omega / d_omega).astype(int), edges.size - 2)
    counts = np.bincount(idx, minlength=edges.size - 1)
    s1 = np.bincount(idx, weights=x, minlength=edges.size - 1)
    s2 = np.bincount(idx, weights=x * x, minlength=edges.size - 1)
    filled = (counts > 0) & (s1 > 0)
    gamma = s2[filled] * counts[filled] / s1[filled] ** 2
    centers = 0.5 * (edges[:-1] + edges[1:])[filled]
    curve = GammaCurve(centers, gamma, counts[filled], counts[filled] >= min_count)
    stats.gamma_curve = curve
    return curve


def _normal_cdf(mu, sd):
    return lambda x: sps.norm.cdf(x, loc=mu, scale=sd)


def element_histograms(stats_or_values, omega_cut: float = 0.1, bins: int = 60,
                       min_samples: int = 100) -> ElementHistograms:
    """Distributions of O_nm and ln|O_nm| at small omega with Gaussian references.

    Accepts :class:`OffDiagonalStats` (filtered to ``omega < omega_cut``) or
    a plain array of samples.  Exact zeros are excluded from the logarithmic
    histogram and reported.
    """
    if isinstance(stats_or_values, OffDiagonalStats):
        s = stats_or_values
        x = s.values[s.omega < omega_cut]
    else:
        x = np.asarray(stats_or_values, dtype=float).ravel()
    if x.size < min_samples:
        raise DomainError(f"only {x.size} samples below omega_cut={omega_cut}")
    mu, sd = float(x.mean()), float(x.std())
    lim = np.abs(x).max()
    edges = np.linspace(-lim, lim, bins + 1)
    dens, _ = np.histogram(x, bins=edges, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    gauss = sps.norm.pdf(centers, loc=mu, scale=sd)

    nz = x[x != 0]
    lx = np.log(np.abs(nz))
    lmu, lsd = float(lx.mean()), float(lx.std())
    log_edges = np.linspace(lx.min(), lx.max(), bins + 1)
    log_dens, _ = np.histogram(lx, bins=log_edges, density=True)
    log_centers = 0.5 * (log_edges[:-1] + log_edges[1:])
    lognorm = sps.norm.pdf(log_centers, loc=lmu, scale=lsd)
    return ElementHistograms(
        edges, dens, gauss, log_edges, log_dens, lognorm, int(x.size),
        int(x.size - nz.size), ks_distance(x, _normal_cdf(mu, sd)),
        ks_distance(lx, _normal_cdf(lmu, lsd)),
    )


def offdiagonal_histogram2d(stats: OffDiagonalStats, d_omega: float = 0.1,
                            log_bins: int = 60):
    """Counts of (omega, log10 |O_nm|^2) pairs, normalized per omega column.

    Returns ``(omega_edges, log_edges, density)`` where each omega column of
    ``density`` integrates to one over the log axis (empty columns stay 0).
    """
    keep = stats.values != 0
    om = stats.omega[keep]
    y = np.log10(stats.values[keep] ** 2)
    om_edges = _omega_edges(om, d_omega)
    y_edges = np.linspace(y.min(), y.max(), log_bins + 1)
    H, _, _ = np.histogram2d(om, y, bins=[om_edges, y_edges])
    col = H.sum(axis=1, keepdims=True)
    dy = np.diff(y_edges)[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        dens = np.where(col > 0, H / (np.maximum(col, 1) * dy), 0.0)
    return om_edges, y_edges, dens
