"""Brute-force reference constructions, independent of the package code paths."""
from functools import reduce
from itertools import combinations

import numpy as np

SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
ID = np.eye(2)


def site_op(op, i, N):
    """Embed a single-site operator on site ``i`` (0 based).

    Kronecker factors run from site N-1 down to site 0, so the full-space
    index of a computational state is the same integer whose bit ``i`` is the
    spin of site ``i`` (bit set = up = first column of SZ).  Up is mapped to
    local index 0, so local index = 1 - bit.
    """
    factors = [op if k == i else ID for k in reversed(range(N))]
    return reduce(np.kron, factors)


def full_index(config, N):
    """Full-space row of a bit configuration under the ``site_op`` ordering."""
    mask = (1 << N) - 1
    return config ^ mask


def full_xxz(N, J, delta, theta):
    dim = 2**N
    H = np.zeros((dim, dim), dtype=complex)
    for i in range(N - 1):
        d_i = delta + theta * (2 * (i + 1) - N) / (N - 2)
        H += J * (site_op(SX, i, N) @ site_op(SX, i + 1, N) + site_op(SY, i, N) @ site_op(SY, i + 1, N))
        H += d_i * site_op(SZ, i, N) @ site_op(SZ, i + 1, N)
    assert np.allclose(H.imag, 0)
    return H.real


def full_T(N):
    dim = 2**N
    T = np.zeros((dim, dim), dtype=complex)
    for i in range(N - 2):
        T += site_op(SX, i, N) @ site_op(SX, i + 2, N) + site_op(SY, i, N) @ site_op(SY, i + 2, N)
    return (T / N).real


def full_Z(N):
    dim = 2**N
    Z = np.zeros((dim, dim))
    for i in range(N - 1):
        d_i = 1.0 + (2 * (i + 1) - N) / (N - 2)
        Z += d_i * site_op(SZ, i, N) @ site_op(SZ, i + 1, N)
    return Z / N


def free_fermion_levels(N, n_particles, J=1.0):
    """Many-body levels of the open XX chain as sums of occupied modes."""
    eps = 4.0 * J * np.cos(np.arange(1, N + 1) * np.pi / (N + 1))
    return np.sort([sum(eps[list(c)]) for c in combinations(range(N), n_particles)])


def goe_matrix(rng, D):
    a = rng.normal(size=(D, D))
    return (a + a.T) / 2.0
