"""Gap-ratio sweeps over (N, Delta, theta) and iso-contours of the result."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ..basis import SectorSpec
from ..errors import DomainError
from ..hamiltonian import CouplingProfile
from ..spectral import r_statistics
from .cache import SpectrumCache

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepGrid:
    delta_values: tuple
    theta_values: tuple
    N_values: tuple

    def __post_init__(self):
        if not (self.delta_values and self.theta_values and self.N_values):
            raise DomainError("sweep axes must be nonempty")
        for N in self.N_values:
            if N < 4 or N % 2:
                raise DomainError(f"sweep N must be even and >= 4, got {N}")

    def points(self):
        return list(product(self.N_values, self.delta_values, self.theta_values))


@dataclass
class SweepResult:
    grid: SweepGrid
    rows: list[tuple[int, float, float, float]]
    failures: list[tuple[tuple, str]] = field(default_factory=list)

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(-1, 4)

    def r_grid(self, N: int) -> np.ndarray:
        """<r> on the (delta, theta) grid for one N; NaN where a point failed."""
        table = {(n, d, t): r for n, d, t, r in self.rows}
        g = self.grid
        return np.array([[table.get((N, d, t), np.nan) for t in g.theta_values]
                         for d in g.delta_values])


def sweep_point(N, delta, theta, cache: SpectrumCache, J=1.0, parity="even",
                keep_fraction=1.0) -> float:
    profile = CouplingProfile(int(N), float(delta), float(theta), float(J))
    spec = cache.get(profile, SectorSpec.half_filling(int(N), parity), want_vectors=False)
    return r_statistics(spec, keep_fraction).mean


def run_sweep(grid: SweepGrid, parallelism: int = 1, cache: SpectrumCache | None = None,
              J: float = 1.0, parity: str = "even", keep_fraction: float = 1.0) -> SweepResult:
    """One <r> per grid point.

    Points run in a thread pool (the eigensolver releases the GIL).  A
    failing point is logged and recorded; the rest of the sweep continues.
    Rows always come back in grid order.
    """
    cache = cache if cache is not None else SpectrumCache()
    points = grid.points()

    def work(pt):
        try:
            return sweep_point(*pt, cache=cache, J=J, parity=parity, keep_fraction=keep_fraction), None
        except Exception as exc:  # noqa: BLE001 - recorded per point
            log.warning("sweep point %s failed: %s", pt, exc)
            return None, f"{type(exc).__name__}: {exc}"

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(work, points))
    else:
        outcomes = [work(pt) for pt in points]
    rows, failures = [], []
    for pt, (r, err) in zip(points, outcomes):
        if err is None:
            rows.append((int(pt[0]), float(pt[1]), float(pt[2]), float(r)))
        else:
            failures.append((pt, err))
    return SweepResult(grid, rows, failures)


def moving_average(values, window: int = 1) -> np.ndarray:
    """Centered running mean along the last axis, truncated at the edges."""
    v = np.asarray(values, dtype=float)
    if window <= 1:
        return v.copy()
    half = window // 2
    out = np.empty_like(v)
    n = v.shape[-1]
    for j in range(n):
        lo, hi = max(0, j - half), min(n, j + half + 1)
        out[..., j] = np.nanmean(v[..., lo:hi], axis=-1)
    return out


def _edge_point(p, q, a, b, level):
    t = (level - a) / (b - a)
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def contour_segments(x, y, Z, level: float):
    """Marching-squares iso-line of ``Z`` (rows follow ``y``, columns ``x``).

    Crossings are located by linear interpolation along cell edges; saddle
    cells are resolved with the cell-center average.  Returns a list of
    ``((x0, y0), (x1, y1))`` segments.  Cells touching NaN are skipped.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    Z = np.asarray(Z, dtype=float)
    segs = []
    for i in range(len(y) - 1):
        for j in range(len(x) - 1):
            corners = [(x[j], y[i]), (x[j + 1], y[i]), (x[j + 1], y[i + 1]), (x[j], y[i + 1])]
            vals = [Z[i, j], Z[i, j + 1], Z[i + 1, j + 1], Z[i + 1, j]]
            if np.any(np.isnan(vals)):
                continue
            high = [v >= level for v in vals]
            if all(high) or not any(high):
                continue
            # edges: bottom, right, top, left
            pts = {}
            for e, (a, b) in enumerate(((0, 1), (1, 2), (2, 3), (3, 0))):
                if high[a] != high[b]:
                    pts[e] = _edge_point(corners[a], corners[b], vals[a], vals[b], level)
            if len(pts) == 2:
                p, q = pts.values()
                segs.append((p, q))
                continue
            center_high = np.mean(vals) >= level
            if high[0] == center_high:
                pairs = ((0, 1), (2, 3))
            else:
                pairs = ((0, 3), (1, 2))
            for a, b in pairs:
                segs.append((pts[a], pts[b]))
    return segs
