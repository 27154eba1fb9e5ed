"""Spectrum cache keyed by the exact model parameters.

Keys use the parameters verbatim (no float rounding), so two runs share a
spectrum only if they asked for the identical Hamiltonian.  Reads are
lock-free; writes go through a lock and an atomic rename, so concurrent
sweep workers never observe a half-written file.
"""
from __future__ import annotations

import hashlib
import io
import threading
from pathlib import Path

import numpy as np

from ..basis import SectorSpec, build_symmetrized_basis
from ..hamiltonian import CouplingProfile, build_hamiltonian
from ..spectral import Spectrum, diagonalize
from .io import atomic_write_bytes


def spectrum_key(profile: CouplingProfile, sector: SectorSpec, want_vectors: bool) -> tuple:
    return (*profile.key(), int(sector.n_up), sector.z2_parity, bool(want_vectors))


class SpectrumCache:
    def __init__(self, directory=None, keep_in_memory: bool = True):
        self.directory = Path(directory) if directory is not None else None
        self.keep_in_memory = keep_in_memory
        self._memory: dict[tuple, Spectrum] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _path(self, key) -> Path:
        digest = hashlib.sha256(repr(key).encode()).hexdigest()[:24]
        return self.directory / f"spectrum_{digest}.npz"

    def _load(self, key):
        if key in self._memory:
            return self._memory[key]
        if self.directory is None:
            return None
        path = self._path(key)
        if not path.exists():
            return None
        with np.load(path, allow_pickle=False) as data:
            if tuple(data["key"].tolist()) != tuple(str(k) for k in key):
                return None
            vecs = data["eigenvectors"] if "eigenvectors" in data.files else None
            spec = Spectrum(data["eigenvalues"], vecs, {"cache_key": key})
        if self.keep_in_memory:
            self._memory[key] = spec
        return spec

    def _store(self, key, spec: Spectrum):
        with self._lock:
            if self.keep_in_memory:
                self._memory[key] = spec
            if self.directory is None:
                return
            buf = io.BytesIO()
            arrays = {"eigenvalues": spec.eigenvalues, "key": np.array([str(k) for k in key])}
            if spec.eigenvectors is not None:
                arrays["eigenvectors"] = spec.eigenvectors
            np.savez(buf, **arrays)
            atomic_write_bytes(self._path(key), buf.getvalue())

    def get(self, profile: CouplingProfile, sector: SectorSpec, want_vectors: bool = False) -> Spectrum:
        """Spectrum of ``profile`` in ``sector``, computed on a miss.

        A cached spectrum with eigenvectors also serves eigenvalue-only
        requests.
        """
        key = spectrum_key(profile, sector, want_vectors)
        spec = self._load(key)
        if spec is None and not want_vectors:
            spec = self._load(spectrum_key(profile, sector, True))
        if spec is not None:
            self.hits += 1
            return spec
        self.misses += 1
        basis = build_symmetrized_basis(sector)
        spec = diagonalize(build_hamiltonian(profile, basis), want_vectors,
                           source={"cache_key": key})
        self._store(key, spec)
        return spec

    def clear_memory(self):
        with self._lock:
            self._memory.clear()
