"""Bit-string bases for the fixed-magnetization and spin-inversion sectors.

A configuration is an integer whose bit ``i`` (zero based) encodes site
``i + 1`` of the chain: a set bit means spin up, sigma^z = +1.

In a spin-inversion resolved sector each basis vector is

    |r>_p = (|r> + p |r_bar>) / sqrt(2),   p = +1 (even) or -1 (odd),

where ``r`` is the smaller member of the orbit ``{c, c_bar}`` and ``c_bar``
is the bitwise complement of ``c`` on ``N`` bits.  At half filling no
configuration is its own complement, so every orbit has exactly two members
and the normalization is always 1/sqrt(2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Literal

import numpy as np

from .errors import CapacityError, DomainError

MAX_SITES = 24

Parity = Literal["even", "odd", "none"]
_PARITY_SIGN = {"even": 1, "odd": -1, "none": 0}


def _check_sites(N):
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise DomainError(f"site count must be an integer >= 2, got {N!r}")
    if N > MAX_SITES:
        raise CapacityError(
            f"N={N} exceeds the dense-diagonalization budget (N <= {MAX_SITES})"
        )


def enumerate_sz_sector(N: int, n_up: int) -> np.ndarray:
    """All ``N``-bit configurations with exactly ``n_up`` set bits, ascending."""
    _check_sites(N)
    if not 0 <= n_up <= N:
        raise DomainError(f"n_up={n_up} outside 0..{N}")
    chunk = 1 << 20
    total = 1 << N
    parts = []
    for start in range(0, total, chunk):
        block = np.arange(start, min(start + chunk, total), dtype=np.int64)
        parts.append(block[np.bitwise_count(block) == n_up])
    states = np.concatenate(parts)
    assert states.size == comb(N, n_up)
    return states


def spin_inversion(c, N: int):
    """Flip every spin: bitwise complement on ``N`` bits.  Works on arrays."""
    mask = (1 << N) - 1
    if isinstance(c, np.ndarray):
        return np.bitwise_xor(c, np.int64(mask))
    return int(c) ^ mask


@dataclass(frozen=True)
class SectorSpec:
    """Quantum numbers of a symmetry sector.

    ``z2_parity`` other than ``"none"`` is only meaningful at half filling,
    where spin inversion maps the sector onto itself.
    """

    N: int
    n_up: int
    z2_parity: Parity = "none"

    def __post_init__(self):
        _check_sites(self.N)
        if self.N % 2:
            raise DomainError(f"N must be even, got {self.N}")
        if not 0 <= self.n_up <= self.N:
            raise DomainError(f"n_up={self.n_up} outside 0..{self.N}")
        if self.z2_parity not in _PARITY_SIGN:
            raise DomainError(f"unknown z2_parity {self.z2_parity!r}")
        if self.z2_parity != "none" and 2 * self.n_up != self.N:
            raise DomainError("spin-inversion parity requires n_up = N/2")

    @classmethod
    def half_filling(cls, N: int, z2_parity: Parity = "even") -> "SectorSpec":
        return cls(N, N // 2, z2_parity)

    @property
    def sign(self) -> int:
        """+1 for even, -1 for odd, 0 when inversion is not resolved."""
        return _PARITY_SIGN[self.z2_parity]

    @property
    def expected_dimension(self) -> int:
        full = comb(self.N, self.n_up)
        return full if self.z2_parity == "none" else full // 2


@dataclass(frozen=True)
class SymmetrizedBasis:
    """Sorted representatives of a sector plus a binary-search index lookup."""

    spec: SectorSpec
    representatives: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.representatives.setflags(write=False)

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def dimension(self) -> int:
        return int(self.representatives.size)

    def __len__(self):
        return self.dimension

    def index_of(self, c: int) -> int:
        """Position of representative ``c``; ``KeyError`` if absent."""
        pos = int(np.searchsorted(self.representatives, c))
        if pos >= self.dimension or self.representatives[pos] != c:
            raise KeyError(c)
        return pos

    def lookup(self, configs: np.ndarray) -> np.ndarray:
        """Vectorized index lookup; -1 marks configurations not in the basis."""
        configs = np.asarray(configs, dtype=np.int64)
        pos = np.searchsorted(self.representatives, configs)
        pos_c = np.minimum(pos, self.dimension - 1)
        found = self.representatives[pos_c] == configs
        return np.where(found, pos_c, -1)

    def canonicalize(self, configs: np.ndarray):
        """Map arbitrary sector configurations onto the basis.

        Returns ``(index, phase)`` such that the configuration ``c`` has
        amplitude ``phase / sqrt(2)`` on basis vector ``index`` (or amplitude
        ``phase`` when inversion is not resolved).  For ``c`` already a
        representative the phase is 1; for its complement it is the parity
        sign.
        """
        configs = np.asarray(configs, dtype=np.int64)
        if self.spec.z2_parity == "none":
            idx = self.lookup(configs)
            return idx, np.ones(configs.shape)
        flipped = spin_inversion(configs, self.N)
        is_rep = configs < flipped
        rep = np.where(is_rep, configs, flipped)
        phase = np.where(is_rep, 1.0, float(self.spec.sign))
        return self.lookup(rep), phase

    def to_sz_vector(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Expand a sector vector into plain magnetization-sector amplitudes.

        Returns ``(configs, amplitudes)`` with configs sorted ascending.
        """
        v = np.asarray(v)
        if self.spec.z2_parity == "none":
            return self.representatives.copy(), v.copy()
        reps = self.representatives
        comps = spin_inversion(reps, self.N)
        configs = np.concatenate([reps, comps])
        amps = np.concatenate([v, self.spec.sign * v]) / np.sqrt(2.0)
        order = np.argsort(configs)
        return configs[order], amps[order]


def build_symmetrized_basis(spec: SectorSpec) -> SymmetrizedBasis:
    """Construct the basis of ``spec``.

    For a resolved parity the representative of each inversion orbit is the
    numerically smaller member, which keeps the list sorted and the choice
    reproducible.
    """
    states = enumerate_sz_sector(spec.N, spec.n_up)
    if spec.z2_parity != "none":
        states = states[states < spin_inversion(states, spec.N)]
    basis = SymmetrizedBasis(spec, states)
    assert basis.dimension == spec.expected_dimension
    return basis


def spins(configs, N: int) -> np.ndarray:
    """sigma^z eigenvalues (+1/-1) of each site, shape ``(..., N)``."""
    configs = np.asarray(configs, dtype=np.int64)
    bits = (configs[..., None] >> np.arange(N, dtype=np.int64)) & 1
    return 2 * bits - 1
