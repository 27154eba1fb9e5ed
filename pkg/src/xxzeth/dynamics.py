"""Quench dynamics from random product states.

Product states with zero magnetization are not spin-inversion eigenstates,
so evolution runs in the plain half-filled sector (no Z2 resolution), using
the full eigendecomposition:

    psi(t) = sum_n C_n exp(-i E_n t) v_n,   C_n = <v_n | psi(0)>.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import SectorSpec, SymmetrizedBasis, build_symmetrized_basis
from .errors import DomainError
from .hamiltonian import CouplingProfile, build_hamiltonian
from .spectral import Spectrum, diagonalize

LDOS_WEIGHT_CUTOFF = 1e-16


def default_times(n: int = 64) -> np.ndarray:
    return np.logspace(-1, 3, n)


@dataclass(frozen=True)
class QuenchConfig:
    profile: CouplingProfile
    times: tuple = tuple(default_times())
    n_realizations: int = 1000
    seed: int = 0
    cut: int | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size == 0 or np.any(t < 0) or np.any(np.diff(t) < 0):
            raise DomainError("times must be a nonempty nonnegative ascending grid")
        if self.n_realizations < 1:
            raise DomainError("n_realizations must be >= 1")
        if self.cut is not None and not 1 <= self.cut <= self.profile.N - 1:
            raise DomainError(f"cut {self.cut} outside 1..{self.profile.N - 1}")

    @property
    def bipartition(self) -> int:
        return self.profile.N // 2 if self.cut is None else self.cut


@dataclass
class LdosSummary:
    weights: np.ndarray
    energies: np.ndarray
    mean: float
    variance: float

    @classmethod
    def from_amplitudes(cls, energies, amplitudes) -> "LdosSummary":
        w = np.abs(np.asarray(amplitudes)) ** 2
        keep = w >= LDOS_WEIGHT_CUTOFF
        w, E = w[keep], np.asarray(energies)[keep]
        mean = float(np.dot(w, E) / w.sum())
        var = float(np.dot(w, (E - mean) ** 2) / w.sum())
        return cls(w, E, mean, max(var, 0.0))

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.variance))

    @property
    def ipr(self) -> float:
        """Sum of |C_n|^4, the infinite-time average of the survival probability."""
        return float(np.sum(self.weights**2))

    def histogram(self, bins: int = 100):
        """Weight density on an energy grid: ``(edges, density)``."""
        dens, edges = np.histogram(self.energies, bins=bins, weights=self.weights, density=True)
        return edges, dens


@dataclass
class TimeSeries:
    times: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    count: int

    @classmethod
    def from_samples(cls, times, samples: np.ndarray) -> "TimeSeries":
        """Aggregate a ``(realizations, times)`` array."""
        n = samples.shape[0]
        mean = samples.mean(axis=0)
        if n > 1:
            stderr = samples.std(axis=0, ddof=1) / np.sqrt(n)
        else:
            stderr = np.zeros_like(mean)
        return cls(np.asarray(times, dtype=float), mean, stderr, n)

    def window_mean(self, t_min: float, t_max: float = np.inf) -> float:
        m = (self.times >= t_min) & (self.times <= t_max)
        if not m.any():
            raise DomainError(f"no samples in time window [{t_min}, {t_max}]")
        return float(self.mean[m].mean())


@dataclass
class QuenchResult:
    entropy: TimeSeries
    survival: TimeSeries
    ldos: LdosSummary
    ldos_variances: np.ndarray = field(repr=False)
    iprs: np.ndarray = field(repr=False)
    initial_states: np.ndarray = field(repr=False)
    dimension: int = 0

    def __iter__(self):
        return iter((self.entropy, self.survival, self.ldos))


def half_filled_sector(N: int) -> SymmetrizedBasis:
    return build_symmetrized_basis(SectorSpec(N, N // 2, "none"))


def sample_product_state(rng: np.random.Generator, N: int, sector: SectorSpec | None = None) -> int:
    """Uniformly random configuration with N/2 up spins."""
    if sector is not None and (sector.n_up * 2 != sector.N or sector.z2_parity != "none"):
        raise DomainError("product states are drawn in the plain half-filled sector")
    up = rng.choice(N, size=N // 2, replace=False)
    return int(np.sum(np.left_shift(1, up.astype(np.int64))))


def product_state_vector(basis: SymmetrizedBasis, config: int) -> np.ndarray:
    v = np.zeros(basis.dimension)
    v[basis.index_of(config)] = 1.0
    return v


def _need_vectors(spec):
    if spec.eigenvectors is None:
        raise DomainError("evolution needs eigenvectors")


def evolve(spec: Spectrum, psi0: np.ndarray, t) -> np.ndarray:
    """State at time(s) ``t``; shape ``(D,)`` for scalar t, ``(D, len(t))`` otherwise."""
    _need_vectors(spec)
    psi0 = np.asarray(psi0)
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > 1e-10:
        raise DomainError(f"initial state is not normalized (|psi| = {norm})")
    V = spec.eigenvectors
    C = V.T @ psi0
    scalar = np.ndim(t) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if scalar and ts[0] == 0.0:
        return psi0.astype(complex)
    phases = np.exp(-1j * np.outer(spec.eigenvalues, ts))
    psi = V @ (C[:, None] * phases)
    return psi[:, 0] if scalar else psi


@lru_cache(maxsize=32)
def _schmidt_layout(configs_bytes: bytes, N: int, cut: int):
    configs = np.frombuffer(configs_bytes, dtype=np.int64)
    left = configs & ((1 << cut) - 1)
    right = configs >> cut
    nl = np.bitwise_count(left)
    blocks = []
    for k in np.unique(nl):
        members = np.nonzero(nl == k)[0]
        lu, li = np.unique(left[members], return_inverse=True)
        ru, ri = np.unique(right[members], return_inverse=True)
        blocks.append((members, li, ri, lu.size, ru.size))
    return blocks


def _sector_amplitudes(psi, basis):
    if basis.spec.z2_parity == "none":
        return basis.representatives, psi
    reps = basis.representatives
    comps = reps ^ ((1 << basis.N) - 1)
    configs = np.concatenate([reps, comps])
    amps = np.concatenate([psi, basis.spec.sign * psi], axis=0) / np.sqrt(2.0)
    return configs, amps


def schmidt_spectrum(psi: np.ndarray, basis: SymmetrizedBasis, cut: int, side: str = "left") -> np.ndarray:
    """Eigenvalues of the reduced density matrix of one side of the cut.

    ``psi`` may carry a trailing time axis; the result then has shape
    ``(T, k)`` with zero padding.  The left block holds sites 1..cut.
    """
    N = basis.N
    if not 1 <= cut <= N - 1:
        raise DomainError(f"cut {cut} outside 1..{N - 1}")
    configs, amps = _sector_amplitudes(np.asarray(psi), basis)
    batch = amps.ndim == 2
    if not batch:
        amps = amps[:, None]
    T = amps.shape[1]
    order = np.argsort(configs)
    configs, amps = configs[order], amps[order]
    lams = []
    for members, li, ri, nL, nR in _schmidt_layout(configs.tobytes(), N, cut):
        M = np.zeros((T, nL, nR), dtype=amps.dtype)
        M[:, li, ri] = amps[members].T
        if side == "left":
            rho = M @ np.conj(np.swapaxes(M, 1, 2))
        else:
            rho = np.swapaxes(M, 1, 2) @ np.conj(M)
        lams.append(np.linalg.eigvalsh(rho))
    out = np.concatenate(lams, axis=1)
    return out if batch else out[0]


def entanglement_entropy(psi: np.ndarray, basis: SymmetrizedBasis, cut: int | None = None,
                         side: str = "left"):
    """Von Neumann entropy (natural log) of the block of sites 1..cut."""
    cut = basis.N // 2 if cut is None else cut
    lam = np.clip(schmidt_spectrum(psi, basis, cut, side), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 1e-300, -lam * np.log(lam), 0.0)
    return terms.sum(axis=-1)


def survival_probability(ldos: LdosSummary, t):
    """|sum_n |C_n|^2 exp(-i E_n t)|^2, vectorized over ``t``."""
    ts = np.asarray(t, dtype=float)
    amp = np.exp(-1j * np.multiply.outer(ts, ldos.energies)) @ ldos.weights
    return np.abs(amp) ** 2


def fit_gaussian_decay(times, P, p_min: float = 0.5) -> float:
    """Fit P(t) = exp(-sigma^2 t^2) on points with P >= p_min; returns sigma.

    Least squares for ln P = -sigma^2 t^2 through the origin.
    """
    t = np.asarray(times, dtype=float)
    P = np.asarray(P, dtype=float)
    m = (P >= p_min) & (t > 0)
    if m.sum() < 2:
        raise DomainError("fewer than two early-time points above p_min")
    x = t[m] ** 2
    y = -np.log(P[m])
    return float(np.sqrt(np.dot(x, y) / np.dot(x, x)))


def realization_seeds(seed: int, n: int) -> list[np.random.SeedSequence]:
    """Child seed sequences for realizations 0..n-1.

    Child ``k`` is ``SeedSequence(seed, spawn_key=(k,))``, so realization
    ``k`` draws the same numbers however the work is split or ordered.
    """
    return [np.random.SeedSequence(seed, spawn_key=(k,)) for k in range(n)]


def quench_spectrum(profile: CouplingProfile) -> tuple[SymmetrizedBasis, Spectrum]:
    basis = half_filled_sector(profile.N)
    spec = diagonalize(build_hamiltonian(profile, basis), want_vectors=True,
                       source={"profile": profile.key()})
    return basis, spec


def run_realization(spec: Spectrum, basis: SymmetrizedBasis, config: int, times, cut: int):
    psi0 = product_state_vector(basis, config)
    C = spec.eigenvectors[basis.index_of(config)]
    ldos = LdosSummary.from_amplitudes(spec.eigenvalues, C)
    psi_t = evolve(spec, psi0, np.asarray(times))
    S = entanglement_entropy(psi_t, basis, cut)
    P = survival_probability(ldos, times)
    return S, P, ldos


def quench_campaign(config: QuenchConfig, spectrum: tuple[SymmetrizedBasis, Spectrum] | None = None,
                    initial_states=None) -> QuenchResult:
    """Realization-averaged S(t) and P(t) from random half-filled product states.

    ``initial_states`` overrides the random draw (one configuration per
    realization), which is how eigenstate-free checks are set up.
    """
    basis, spec = spectrum if spectrum is not None else quench_spectrum(config.profile)
    times = np.asarray(config.times, dtype=float)
    if initial_states is None:
        initial_states = [
            sample_product_state(np.random.default_rng(ss), basis.N)
            for ss in realization_seeds(config.seed, config.n_realizations)
        ]
    S_all, P_all, ldoses = [], [], []
    for c in initial_states:
        S, P, ldos = run_realization(spec, basis, int(c), times, config.bipartition)
        S_all.append(S)
        P_all.append(P)
        ldoses.append(ldos)
    n = len(ldoses)
    pooled = LdosSummary.from_amplitudes(
        np.concatenate([l.energies for l in ldoses]),
        np.sqrt(np.concatenate([l.weights for l in ldoses]) / n),
    )
    return QuenchResult(
        TimeSeries.from_samples(times, np.array(S_all)),
        TimeSeries.from_samples(times, np.array(P_all)),
        pooled,
        np.array([l.variance for l in ldoses]),
        np.array([l.ipr for l in ldoses]),
        np.asarray(initial_states, dtype=np.int64),
        basis.dimension,
    )
