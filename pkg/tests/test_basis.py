from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from xxzeth.basis import (MAX_SITES, SectorSpec, build_symmetrized_basis, enumerate_sz_sector,
                          spin_inversion, spins)
from xxzeth.errors import CapacityError, DomainError


def b(s: str) -> int:
    """Bit string, most significant bit first."""
    return int(s, 2)


def test_enumerate_four_sites_half_filled():
    got = enumerate_sz_sector(4, 2).tolist()
    assert got == [b(s) for s in ("0011", "0101", "0110", "1001", "1010", "1100")]


def test_enumerate_two_sites():
    assert enumerate_sz_sector(2, 1).tolist() == [b("01"), b("10")]


def test_enumerate_twenty_sites_count():
    states = enumerate_sz_sector(20, 10)
    assert states.size == 184756
    assert np.all(np.diff(states) > 0)
    assert np.all(np.bitwise_count(states) == 10)


@pytest.mark.parametrize("N", range(2, 15))
def test_enumerate_all_fillings(N):
    for n_up in range(N + 1):
        states = enumerate_sz_sector(N, n_up)
        assert states.size == comb(N, n_up)
        assert np.all(np.diff(states) > 0)
        assert np.all(np.bitwise_count(states) == n_up)
        assert states.size == 0 or states[-1] < 2**N


def test_enumerate_errors():
    with pytest.raises(CapacityError):
        enumerate_sz_sector(MAX_SITES + 2, 3)
    with pytest.raises(DomainError):
        enumerate_sz_sector(6, 7)
    with pytest.raises(DomainError):
        enumerate_sz_sector(6, -1)


def test_spin_inversion_examples():
    assert spin_inversion(b("0011"), 4) == b("1100")
    assert spin_inversion(b("0101"), 4) == b("1010")


@given(st.integers(min_value=2, max_value=24).flatmap(
    lambda N: st.tuples(st.just(N), st.integers(0, 2**N - 1))))
def test_spin_inversion_is_an_involution(args):
    N, c = args
    assert spin_inversion(spin_inversion(c, N), N) == c
    assert spin_inversion(c, N) != c


@pytest.mark.parametrize("N, D", [(4, 3), (18, 24310), (20, 92378)])
def test_even_sector_dimension(N, D):
    spec = SectorSpec.half_filling(N, "even")
    assert spec.expected_dimension == D
    if N <= 18:
        assert build_symmetrized_basis(spec).dimension == D


@pytest.mark.parametrize("N", range(4, 21, 2))
def test_even_plus_odd_is_half_filled_count(N):
    even = SectorSpec.half_filling(N, "even").expected_dimension
    odd = SectorSpec.half_filling(N, "odd").expected_dimension
    assert even == odd == comb(N, N // 2) // 2
    assert even + odd == comb(N, N // 2)


@pytest.mark.parametrize("N", [4, 6, 8, 10, 12])
def test_orbits_partition_the_sector(N):
    basis = build_symmetrized_basis(SectorSpec.half_filling(N))
    reps = basis.representatives
    comps = spin_inversion(reps, N)
    assert np.all(reps < comps)
    union = np.sort(np.concatenate([reps, comps]))
    assert np.array_equal(union, enumerate_sz_sector(N, N // 2))
    assert np.array_equal(basis.lookup(reps), np.arange(basis.dimension))
    assert np.all(basis.lookup(comps) == -1)


def test_index_lookup_and_canonicalize():
    basis = build_symmetrized_basis(SectorSpec.half_filling(6, "odd"))
    r = int(basis.representatives[4])
    assert basis.index_of(r) == 4
    with pytest.raises(KeyError):
        basis.index_of(spin_inversion(r, 6))
    idx, phase = basis.canonicalize(np.array([r, spin_inversion(r, 6)]))
    assert idx.tolist() == [4, 4]
    assert phase.tolist() == [1.0, -1.0]


def test_to_sz_vector_is_normalized_symmetric_state():
    basis = build_symmetrized_basis(SectorSpec.half_filling(6, "even"))
    v = np.zeros(basis.dimension)
    v[2] = 1.0
    configs, amps = basis.to_sz_vector(v)
    nz = configs[amps != 0]
    assert sorted(nz.tolist()) == sorted([int(basis.representatives[2]),
                                          spin_inversion(int(basis.representatives[2]), 6)])
    assert np.isclose(np.linalg.norm(amps), 1.0)


def test_sector_spec_validation():
    with pytest.raises(DomainError):
        SectorSpec(5, 2)
    with pytest.raises(DomainError):
        SectorSpec(6, 2, "even")
    assert SectorSpec(6, 2).expected_dimension == comb(6, 2)


def test_spins_reads_bits_as_sites():
    assert spins(b("0001"), 4).tolist() == [1, -1, -1, -1]
    assert spins(b("1010"), 4).tolist() == [-1, 1, -1, 1]
