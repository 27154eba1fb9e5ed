"""Dense eigendecomposition and level statistics.

Unfolding fits a polynomial to the level staircase, evaluated at the
midpoints ``n + 1/2`` of its steps, then keeps a central fraction of the
levels by index.  The gap ratio needs no unfolding.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError, EigensolverError
from .hamiltonian import OperatorMatrix

log = logging.getLogger(__name__)

R_GOE = 0.5307
R_POISSON = 2.0 * np.log(2.0) - 1.0
MIN_STABLE_LEVELS = 200


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = field(default=None, repr=False)
    source: dict[str, Any] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return self.eigenvalues.size

    @property
    def span(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[0])


@dataclass
class UnfoldedSpectrum:
    retained_levels: np.ndarray
    unfolded: np.ndarray
    poly_degree: int
    keep_fraction: float

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.unfolded)


@dataclass
class SpacingHistogram:
    """Spacing density on ``[0, s_max]``.

    Densities are normalized by the total number of spacings, so
    ``sum(density * width) + overflow == 1`` where ``overflow`` is the share
    of spacings beyond ``s_max``.
    """

    bin_edges: np.ndarray
    densities: np.ndarray
    sample_count: int
    overflow: float = 0.0

    @property
    def bin_width(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


@dataclass
class RStatistics:
    r_values: np.ndarray
    mean: float
    skipped: int = 0


def diagonalize(M, want_vectors: bool = True, source: dict | None = None) -> Spectrum:
    """Full eigendecomposition of a real symmetric matrix.

    Eigenvalues come back ascending; column ``n`` of the eigenvector matrix
    belongs to eigenvalue ``n``.
    """
    if isinstance(M, OperatorMatrix):
        src = {"label": M.label, "sector": M.basis.spec}
        A = M.entries
    else:
        src = {}
        A = np.asarray(M, dtype=float)
    if source:
        src.update(source)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12 * scale):
        raise DomainError("matrix is not symmetric")
    try:
        if want_vectors:
            w, v = np.linalg.eigh(A)
        else:
            w, v = np.linalg.eigvalsh(A), None
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigh failed for D={A.shape[0]}: {exc}") from exc
    return Spectrum(w, v, src)


def _levels(spec) -> np.ndarray:
    if isinstance(spec, Spectrum):
        return spec.eigenvalues
    return np.sort(np.asarray(spec, dtype=float))


def central_window(n: int, keep_fraction: float) -> slice:
    """Index slice of the central ``keep_fraction`` of ``n`` sorted levels."""
    if not 0.0 < keep_fraction <= 1.0:
        raise DomainError(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    n_keep = int(round(keep_fraction * n))
    start = (n - n_keep) // 2
    return slice(start, start + n_keep)


def unfold(spec, poly_degree: int = 12, keep_fraction: float = 0.8) -> UnfoldedSpectrum:
    """Map levels onto unit mean spacing with a polynomial staircase fit.

    The fit spans the whole spectrum; afterwards only the central
    ``keep_fraction`` of levels (by index) is retained.  If the fitted
    staircase is not increasing over the retained range the degree is
    lowered until it is, with a warning.
    """
    E = _levels(spec)
    n = E.size
    if n < poly_degree + 2 or n < 3:
        raise DomainError(f"{n} levels are too few to unfold at degree {poly_degree}")
    if n < MIN_STABLE_LEVELS:
        warnings.warn(f"unfolding only {n} levels; the staircase fit may be unstable", stacklevel=2)
    window = central_window(n, keep_fraction)
    staircase = np.arange(n) + 0.5
    kept = E[window]
    for degree in range(poly_degree, 0, -1):
        fit = Polynomial.fit(E, staircase, degree)
        unfolded = fit(kept)
        if np.all(np.diff(unfolded) > 0) and np.all(fit.deriv()(kept) > 0):
            break
        warnings.warn(
            f"staircase fit of degree {degree} is not monotone; lowering the degree",
            stacklevel=2,
        )
    else:
        raise DomainError("no monotone staircase fit found")
    return UnfoldedSpectrum(kept, unfolded, degree, keep_fraction)


def poisson_pdf(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("spacing must be nonnegative")
    return np.exp(-s)


def wigner_dyson_pdf(s):
    """GOE Wigner surmise (pi s / 2) exp(-pi s^2 / 4)."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("spacing must be nonnegative")
    return 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s * s)


def poisson_cdf(s):
    return 1.0 - np.exp(-np.clip(np.asarray(s, dtype=float), 0.0, None))


def wigner_dyson_cdf(s):
    s = np.clip(np.asarray(s, dtype=float), 0.0, None)
    return 1.0 - np.exp(-0.25 * np.pi * s * s)


def spacing_distribution(u, bin_width: float = 0.1, s_max: float = 4.0) -> SpacingHistogram:
    spacings = u.spacings if isinstance(u, UnfoldedSpectrum) else np.asarray(u, dtype=float)
    if spacings.size == 0:
        raise DomainError("no spacings to histogram")
    n_bins = int(round(s_max / bin_width))
    edges = np.linspace(0.0, n_bins * bin_width, n_bins + 1)
    counts, _ = np.histogram(spacings, bins=edges)
    total = spacings.size
    densities = counts / (total * bin_width)
    overflow = 1.0 - counts.sum() / total
    return SpacingHistogram(edges, densities, int(total), float(overflow))


def r_statistics(spec, keep_fraction: float = 1.0) -> RStatistics:
    """Ratios of consecutive level spacings, r = min(r_n, 1/r_n).

    Spacings below 1e-12 times the spectral span count as degenerate; any
    ratio touching one is dropped and the number dropped is reported.
    """
    E = _levels(spec)
    if E.size < 3:
        raise DomainError("gap ratios need at least three levels")
    E = E[central_window(E.size, keep_fraction)]
    gaps = np.diff(E)
    span = E[-1] - E[0]
    ok = gaps > 1e-12 * span
    left, right = gaps[:-1], gaps[1:]
    valid = ok[:-1] & ok[1:]
    skipped = int((~valid).sum())
    if not valid.any():
        raise DomainError("spectrum is fully degenerate")
    if skipped:
        log.warning("skipped %d gap ratios with degenerate spacings", skipped)
    a, b = left[valid], right[valid]
    r = np.minimum(a, b) / np.maximum(a, b)
    return RStatistics(r, float(r.mean()), skipped)


def ks_distance(hist_or_samples, reference_cdf: Callable) -> float:
    """Kolmogorov-Smirnov sup distance to a reference CDF.

    Samples give the exact empirical statistic; a :class:`SpacingHistogram`
    is compared at its bin edges.
    """
    if isinstance(hist_or_samples, SpacingHistogram):
        h = hist_or_samples
        edges = h.bin_edges
        emp = np.concatenate([[0.0], np.cumsum(h.densities * h.bin_width)])
        return float(np.max(np.abs(emp - reference_cdf(edges))))
    x = np.sort(np.asarray(hist_or_samples, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise DomainError("no samples")
    F = reference_cdf(x)
    upper = np.arange(1, n + 1) / n - F
    lower = F - np.arange(n) / n
    return float(max(upper.max(), lower.max()))


def sample_poisson_levels(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uncorrelated levels with unit mean spacing."""
    return np.cumsum(rng.exponential(size=n))


def sample_goe_levels(rng: np.random.Generator, D: int) -> np.ndarray:
    a = rng.normal(size=(D, D))
    return np.linalg.eigvalsh(a + a.T)
