"""Run configuration.

A config file is TOML with one table per concern::

    task = "eth"

    [model]
    N = 14
    delta = 1.0
    theta = 1.0

    [eth]
    observables = ["T"]

Every key has a default matching the standard analysis settings, so a
bare task name plus ``N`` is a complete run description.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..basis import MAX_SITES
from ..errors import CapacityError, ConfigError

TASKS = ("spectrum", "pscan", "rsweep", "eth", "quench")
OBSERVABLES = ("T", "Z")

# table name for every field; fields absent here live at top level
SECTIONS = {
    "model": ("N", "delta", "theta", "J", "parity"),
    "spectral": ("poly_degree", "keep_fraction", "r_keep_fraction", "bin_width", "s_max"),
    "eth": ("observables", "d_eps", "central_fraction", "d_omega", "window_fraction",
            "omega_cut", "gamma_min_count"),
    "quench": ("t_min", "t_max", "n_times", "n_realizations", "cut"),
    "sweep": ("N_values", "delta_values", "theta_values", "contour_level", "smooth_window"),
}


@dataclass(frozen=True)
class RunConfig:
    task: str = "spectrum"
    # model
    N: int = 14
    delta: float = 1.0
    theta: float = 1.0
    J: float = 1.0
    parity: str = "even"
    # level statistics
    poly_degree: int = 12
    keep_fraction: float = 0.8
    r_keep_fraction: float = 1.0
    bin_width: float = 0.1
    s_max: float = 4.0
    # matrix elements
    observables: tuple = OBSERVABLES
    d_eps: float = 0.01
    central_fraction: float = 0.2
    d_omega: float = 0.1
    window_fraction: float = 0.075
    omega_cut: float = 0.1
    gamma_min_count: int = 50
    # dynamics
    t_min: float = 0.1
    t_max: float = 1000.0
    n_times: int = 64
    n_realizations: int = 1000
    cut: int | None = None
    # sweep
    N_values: tuple = (14,)
    delta_values: tuple = (0.5,)
    theta_values: tuple = tuple(float(x) for x in np.round(np.linspace(0.5, 8.0, 16), 6))
    contour_level: float = 0.52
    smooth_window: int = 1
    # run
    seed: int = 0
    out: str = "results"
    threads: int = 1

    def problems(self) -> list[str]:
        p = []
        if self.task not in TASKS:
            p.append(f"task must be one of {TASKS}, got {self.task!r}")
        Ns = (self.N,) + tuple(self.N_values) if self.task == "rsweep" else (self.N,)
        for n in Ns:
            if not isinstance(n, int) or n < 4 or n % 2:
                p.append(f"N must be an even integer >= 4, got {n!r}")
        if self.parity not in ("even", "odd"):
            p.append(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.poly_degree < 1:
            p.append("poly_degree must be >= 1")
        for name in ("keep_fraction", "r_keep_fraction", "central_fraction", "window_fraction"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                p.append(f"{name} must lie in (0, 1], got {v}")
        for name in ("bin_width", "s_max", "d_eps", "d_omega", "omega_cut", "t_max"):
            if getattr(self, name) <= 0:
                p.append(f"{name} must be positive")
        if self.t_min <= 0 or self.t_min >= self.t_max:
            p.append("need 0 < t_min < t_max")
        if self.n_times < 2:
            p.append("n_times must be >= 2")
        if self.n_realizations < 1:
            p.append("n_realizations must be >= 1")
        if self.cut is not None and not 1 <= self.cut <= self.N - 1:
            p.append(f"cut must lie in 1..N-1, got {self.cut}")
        bad = [o for o in self.observables if o not in OBSERVABLES]
        if bad or not self.observables:
            p.append(f"observables must be a nonempty subset of {OBSERVABLES}")
        if self.task == "rsweep" and not (self.N_values and self.delta_values and self.theta_values):
            p.append("sweep axes must be nonempty")
        if self.smooth_window < 1:
            p.append("smooth_window must be >= 1")
        if self.threads < 1:
            p.append("threads must be >= 1")
        return p

    def validate(self) -> "RunConfig":
        p = self.problems()
        if p:
            raise ConfigError(p)
        Ns = (self.N,) + (tuple(self.N_values) if self.task == "rsweep" else ())
        if max(Ns) > MAX_SITES:
            raise CapacityError(f"N={max(Ns)} exceeds the dense budget N <= {MAX_SITES}")
        return self

    def times(self) -> np.ndarray:
        return np.logspace(np.log10(self.t_min), np.log10(self.t_max), self.n_times)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **_coerce(changes))

    def to_dict(self) -> dict[str, Any]:
        """Nested mapping mirroring the TOML layout."""
        flat = {f.name: getattr(self, f.name) for f in fields(self)}
        out: dict[str, Any] = {}
        placed = set()
        for section, names in SECTIONS.items():
            out[section] = {}
            for n in names:
                v = flat[n]
                out[section][n] = list(v) if isinstance(v, tuple) else v
                placed.add(n)
        for n, v in flat.items():
            if n not in placed:
                out[n] = v
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        """Build from a nested (TOML-style) or flat mapping, reporting all unknown keys."""
        flat: dict[str, Any] = {}
        unknown = []
        names = {f.name for f in fields(cls)}
        for key, value in data.items():
            if key in SECTIONS and isinstance(value, dict):
                for k, v in value.items():
                    if k in SECTIONS[key]:
                        flat[k] = v
                    else:
                        unknown.append(f"{key}.{k}")
            elif key in names:
                flat[key] = value
            else:
                unknown.append(key)
        if unknown:
            raise ConfigError([f"unknown config key {k!r}" for k in unknown])
        try:
            return cls(**_coerce(flat))
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path, **overrides) -> "RunConfig":
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data).replace(**overrides)


_TUPLE_FIELDS = ("observables", "N_values", "delta_values", "theta_values")
_INT_FIELDS = ("N", "poly_degree", "gamma_min_count", "n_times", "n_realizations",
               "smooth_window", "seed", "threads")
_FLOAT_FIELDS = ("delta", "theta", "J", "keep_fraction", "r_keep_fraction", "bin_width",
                 "s_max", "d_eps", "central_fraction", "d_omega", "window_fraction",
                 "omega_cut", "t_min", "t_max", "contour_level")


def _coerce(values: dict[str, Any]) -> dict[str, Any]:
    out = dict(values)
    for k in _TUPLE_FIELDS:
        if k in out and out[k] is not None:
            v = out[k]
            v = [v] if isinstance(v, (str, int, float)) else list(v)
            if k == "N_values":
                v = [int(x) for x in v]
            elif k in ("delta_values", "theta_values"):
                v = [float(x) for x in v]
            out[k] = tuple(v)
    for k in _INT_FIELDS:
        if k in out and out[k] is not None:
            if float(out[k]) != int(out[k]):
                raise ConfigError(f"{k} must be an integer, got {out[k]!r}")
            out[k] = int(out[k])
    for k in _FLOAT_FIELDS:
        if k in out and out[k] is not None:
            out[k] = float(out[k])
    if "cut" in out and out["cut"] is not None:
        out["cut"] = int(out["cut"])
    if "out" in out:
        out["out"] = str(Path(out["out"]))
    return out
