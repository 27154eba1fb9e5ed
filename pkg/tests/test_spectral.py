
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import goe_matrix
from xxzeth.errors import DomainError
from xxzeth.spectral import (R_GOE, R_POISSON, SpacingHistogram, Spectrum, diagonalize, ks_distance,
                             poisson_cdf, poisson_pdf, r_statistics, sample_goe_levels,
                             sample_poisson_levels, spacing_distribution, unfold, wigner_dyson_cdf,
                             wigner_dyson_pdf)


def test_diagonalize_small_cases():
    s = diagonalize(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(s.eigenvalues, [-1.0, 1.0])
    s = diagonalize(np.eye(5))
    assert np.allclose(s.eigenvalues, 1.0)
    assert np.allclose(s.eigenvectors.T @ s.eigenvectors, np.eye(5))
    assert diagonalize(np.eye(3), want_vectors=False).eigenvectors is None


def test_diagonalize_residual_and_orthonormality(rng):
    A = goe_matrix(rng, 300)
    s = diagonalize(A)
    V, E = s.eigenvectors, s.eigenvalues
    assert np.all(np.diff(E) >= 0)
    assert np.max(np.linalg.norm(A @ V - V * E, axis=0)) <= 1e-9 * np.linalg.norm(A)
    assert np.max(np.abs(V.T @ V - np.eye(300))) < 1e-10


def test_diagonalize_rejects_bad_input():
    with pytest.raises(DomainError):
        diagonalize(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(DomainError):
        diagonalize(np.ones((2, 3)))


# unfolding

def test_unfold_equally_spaced():
    E = 0.37 * np.arange(1000) - 4.0
    u = unfold(E)
    assert np.max(np.abs(u.spacings - 1.0)) < 1e-6
    assert u.unfolded.size == 800


def test_unfold_is_idempotent_on_linear_spectrum():
    E = np.arange(600, dtype=float)
    once = unfold(E, keep_fraction=1.0).unfolded
    twice = unfold(once, keep_fraction=1.0).unfolded
    assert np.max(np.abs(twice - once)) < 1e-6


def test_unfold_poisson_levels(rng):
    E = sample_poisson_levels(rng, 10_000)
    u = unfold(E)
    assert abs(u.spacings.mean() - 1.0) < 0.01
    assert ks_distance(u.spacings, poisson_cdf) < 0.02


def test_unfold_mean_spacing_goe(rng):
    u = unfold(sample_goe_levels(rng, 1500))
    assert abs(u.spacings.mean() - 1.0) < 0.01
    assert ks_distance(u.spacings, wigner_dyson_cdf) < 0.05


def test_unfold_small_inputs():
    with pytest.raises(DomainError):
        unfold(np.arange(10.0))
    with pytest.warns(UserWarning, match="unstable"):
        unfold(np.arange(50.0))


def test_unfold_accepts_spectrum_object():
    s = Spectrum(np.arange(400.0), None, {})
    assert unfold(s).unfolded.size == 320


# reference distributions

def test_reference_pdf_values():
    assert poisson_pdf(0.0) == 1.0
    assert wigner_dyson_pdf(0.0) == 0.0
    assert wigner_dyson_pdf(1.0) == pytest.approx(np.pi / 2 * np.exp(-np.pi / 4), rel=1e-15)
    s = np.linspace(0, 3, 300_001)
    assert s[np.argmax(wigner_dyson_pdf(s))] == pytest.approx(np.sqrt(2 / np.pi), abs=1e-5)
    with pytest.raises(DomainError):
        poisson_pdf(-0.1)
    with pytest.raises(DomainError):
        wigner_dyson_pdf([0.5, -1.0])


@pytest.mark.parametrize("pdf, cdf", [(poisson_pdf, poisson_cdf), (wigner_dyson_pdf, wigner_dyson_cdf)])
def test_reference_pdfs_normalized(pdf, cdf):
    s = np.linspace(0, 40, 400_001)
    assert np.trapezoid(pdf(s), s) == pytest.approx(1.0, abs=1e-8)
    mid = np.linspace(0, 5, 11)
    assert np.allclose(cdf(mid), [np.trapezoid(pdf(np.linspace(0, m, 20001)), np.linspace(0, m, 20001))
                                  for m in mid], atol=1e-7)


def test_spacing_histogram_normalization(rng):
    s = rng.exponential(size=5000)
    h = spacing_distribution(s)
    assert isinstance(h, SpacingHistogram)
    assert h.bin_edges.size == 41
    assert np.sum(h.densities * h.bin_width) + h.overflow == pytest.approx(1.0, abs=1e-9)
    assert h.overflow == pytest.approx(np.mean(s >= 4.0))
    with pytest.raises(DomainError):
        spacing_distribution(np.array([]))


# gap ratios

def test_r_equal_spacing():
    r = r_statistics(np.arange(100.0))
    assert np.all(r.r_values == 1.0)
    assert r.mean == 1.0


def test_r_poisson_reference(rng):
    r = r_statistics(sample_poisson_levels(rng, 100_000))
    assert R_POISSON == pytest.approx(2 * np.log(2) - 1)
    assert abs(r.mean - R_POISSON) < 0.005


def test_r_goe_reference(rng):
    means = [r_statistics(sample_goe_levels(rng, 2000)).mean for _ in range(10)]
    assert abs(np.mean(means) - R_GOE) < 0.005


def test_r_values_in_unit_interval(rng):
    r = r_statistics(rng.normal(size=500))
    assert np.all((r.r_values >= 0) & (r.r_values <= 1))


@given(scale=st.integers(-6, 6), shift=st.floats(-1e3, 1e3))
@settings(max_examples=30, deadline=None)
def test_r_affine_invariance_exact(scale, shift):
    E = np.sort(np.random.default_rng(7).normal(size=400))
    a = 2.0**scale
    base = r_statistics(E + 0.0)
    # power-of-two scaling is exact in floating point; the shift is applied to a dyadic grid
    grid = np.round(E * 2**20) / 2**20
    b0 = r_statistics(grid)
    b1 = r_statistics(a * grid + np.round(shift))
    assert np.array_equal(b0.r_values, b1.r_values)
    assert np.array_equal(base.r_values, r_statistics(a * E).r_values)


@given(a=st.floats(0.01, 100), offset=st.floats(-10, 10))
@settings(max_examples=30, deadline=None)
def test_r_affine_invariance_general(a, offset):
    # offset measured in units of the scale so rounding stays at the 1e-12 level
    E = np.sort(np.random.default_rng(11).normal(size=400))
    got = r_statistics(a * E + a * offset).r_values
    assert np.allclose(got, r_statistics(E).r_values, rtol=0, atol=1e-9)


def test_r_degenerate_levels_skipped(caplog):
    E = np.array([0.0, 1.0, 1.0, 3.0, 4.5, 7.0])
    r = r_statistics(E)
    assert r.skipped == 2
    assert r.r_values.size == 2
    with pytest.raises(DomainError):
        r_statistics(np.zeros(5))
    with pytest.raises(DomainError):
        r_statistics(np.array([0.0, 1.0]))


# Kolmogorov-Smirnov

def test_ks_identical_distributions_and_small_samples(rng):
    assert ks_distance(np.array([0.5]), lambda x: np.where(x >= 0.5, 1.0, 0.0)) <= 1.0
    x = rng.exponential(size=20_000)
    assert ks_distance(x, poisson_cdf) < 3 / np.sqrt(x.size)


def test_ks_matches_scipy(rng):
    from scipy import stats
    x = rng.exponential(size=3000)
    assert ks_distance(x, poisson_cdf) == pytest.approx(stats.kstest(x, "expon").statistic, abs=1e-12)


def test_ks_separates_poisson_from_wigner_dyson(rng):
    x = rng.exponential(size=1000)
    assert ks_distance(x, wigner_dyson_cdf) > 0.1


def test_ks_of_reference_histogram_is_zero():
    edges = np.linspace(0, 4, 41)
    dens = np.diff(poisson_cdf(edges)) / 0.1
    h = SpacingHistogram(edges, dens, 10**6, float(np.exp(-4.0)))
    assert ks_distance(h, poisson_cdf) < 1e-12
