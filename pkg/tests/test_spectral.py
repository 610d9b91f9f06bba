import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclicdiff import kernels
from cyclicdiff.asymptotics import coefficients, predicted_state
from cyclicdiff.core import PointCloud, evolve_iterative, relative_discrepancy, step
from cyclicdiff.errors import NotConjugateSymmetric
from cyclicdiff.rng import uniform_cloud
from cyclicdiff.spectral import (
    dft,
    eigen_magnitudes,
    eigen_power_phase,
    eigenvalues,
    evolve_closed_form,
    idft,
    spectral_step,
    spectrum,
)


def brute_dft(x):
    n = len(x)
    return [sum(x[j] * cmath.exp(-2j * math.pi * j * k / n) for j in range(n)) / math.sqrt(n)
            for k in range(n)]


def test_dft_constant_vector():
    out = dft(np.full(6, 2.5))
    assert out[0] == pytest.approx(2.5 * math.sqrt(6), rel=1e-15)
    assert np.max(np.abs(out[1:])) < 1e-15


def test_dft_two_points():
    np.testing.assert_allclose(dft(np.array([1.0, 0.0])), [2 ** -0.5, 2 ** -0.5], rtol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 5, 12, 33])
def test_dft_matches_brute_force(n):
    x = uniform_cloud(n, 1, n)[:, 0]
    np.testing.assert_allclose(dft(x), brute_dft(list(x)), atol=1e-13)


def test_dft_matches_numpy_fft():
    x = uniform_cloud(40, 3, 2)
    np.testing.assert_allclose(dft(x), np.fft.fft(x, axis=0) / math.sqrt(40), atol=1e-14)


@pytest.mark.parametrize("n", [8, 64, 256])
def test_radix2_method_matches_direct(n):
    x = uniform_cloud(n, 2, 1)
    np.testing.assert_allclose(dft(x, method="radix2"), dft(x), rtol=0, atol=1e-12)
    np.testing.assert_allclose(idft(dft(x, method="radix2"), method="radix2"), x, atol=1e-13)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 128), st.integers(0, 2 ** 32))
def test_round_trip(n, seed):
    x = uniform_cloud(n, 2, seed)
    assert np.linalg.norm(idft(dft(x)) - x) <= 1e-12 * np.linalg.norm(x)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 128), st.integers(0, 2 ** 32))
def test_parseval(n, seed):
    x = uniform_cloud(n, 1, seed)[:, 0]
    assert np.sum(np.abs(dft(x)) ** 2) == pytest.approx(np.sum(x * x), rel=1e-12)


def test_idft_constant():
    c = np.zeros(5, dtype=complex)
    c[0] = 3.0 * math.sqrt(5)
    np.testing.assert_allclose(idft(c), np.full(5, 3.0), rtol=1e-15)


def test_idft_rejects_non_symmetric():
    c = np.zeros(6, dtype=complex)
    c[1] = 1.0
    with pytest.raises(NotConjugateSymmetric):
        idft(c)


def test_eigenvalues_basic():
    for n in range(2, 30):
        lam = eigenvalues(n)
        assert lam[0] == 0
        if n % 2 == 0:
            assert lam[n // 2] == -2.0
        else:
            r = 2 * math.cos(math.pi / (2 * n))
            for k in ((n - 1) // 2, (n + 1) // 2):
                assert abs(lam[k]) == pytest.approx(r, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 7, 10, 64, 101])
def test_eigenvalues_match_definition(n):
    omega = cmath.exp(2j * math.pi / n)
    expected = [omega ** k - 1 for k in range(n)]
    np.testing.assert_allclose(eigenvalues(n), expected, atol=1e-13)
    np.testing.assert_allclose(np.abs(eigenvalues(n)),
                               2 * np.sin(np.pi * np.arange(n) / n), atol=1e-12)


def test_eigenvalues_are_circulant_spectrum():
    # dense matrix oracle: columns of the DFT matrix are eigenvectors
    n = 9
    m = np.array([[1 if (j == (i + 1) % n) else (-1 if i == j else 0) for j in range(n)]
                  for i in range(n)], dtype=float)
    omega = np.exp(2j * np.pi / n)
    for k, lam in enumerate(eigenvalues(n)):
        v = omega ** (k * np.arange(n))
        np.testing.assert_allclose(m @ v, lam * v, atol=1e-13)


def test_spectral_radius_claims():
    for n in range(2, 201):
        top = float(np.max(eigen_magnitudes(n)))
        expected = 2.0 if n % 2 == 0 else 2 * math.cos(math.pi / (2 * n))
        assert abs(top - expected) <= 1e-12


def test_power_phase_reduction():
    n = 11
    lam = eigenvalues(n)
    for t in (0, 1, 7, 50):
        cos_t, sin_t = eigen_power_phase(n, t)
        nz = np.abs(lam) > 0
        np.testing.assert_allclose((cos_t + 1j * sin_t)[nz], (lam[nz] / np.abs(lam[nz])) ** t,
                                   atol=1e-12)


def test_spectrum_view():
    view = spectrum(PointCloud(uniform_cloud(8, 2, 0)))
    assert view.n == 8 and view.coeffs.shape == (8, 2)
    assert view.omega == pytest.approx(cmath.exp(2j * math.pi / 8))
    assert view.eigenvalues[0] == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 128), st.integers(1, 3), st.integers(0, 2 ** 32))
def test_spectral_step_equals_step(n, d, seed):
    x = uniform_cloud(n, d, seed)
    out = spectral_step(x)
    expected = step(PointCloud(x)).coords
    assert np.linalg.norm(out - expected) <= 1e-10 * np.linalg.norm(expected)


def test_spectral_route_real_output():
    n, t = 37, 150
    x = uniform_cloud(n, 2, 3)
    lam = eigenvalues(n)
    raw = kernels.dft_direct(lam[:, None] ** t * dft(x) / 2.0 ** t, sign=+1)
    assert np.max(np.abs(raw.imag)) <= 1e-10 * np.linalg.norm(raw.real)


def test_closed_form_identity_and_hand_example():
    x = PointCloud(uniform_cloud(5, 2, 5))
    s0 = evolve_closed_form(x, 0)
    np.testing.assert_allclose(s0.true_coords(), x.coords, rtol=1e-15)
    s2 = evolve_closed_form(PointCloud([1.0, 0.0, 0.0]), 2)
    np.testing.assert_allclose(s2.true_coords()[:, 0], [1, 1, -2], rtol=1e-13)


@pytest.mark.parametrize("n,t", [(2, 1), (3, 57), (16, 200), (25, 199), (50, 200), (64, 133)])
def test_closed_form_matches_iterative(n, t):
    x = PointCloud(uniform_cloud(n, 2, n + t))
    assert relative_discrepancy(evolve_closed_form(x, t), evolve_iterative(x, t)) <= 1e-9


def test_closed_form_huge_t_matches_even_prediction():
    x = PointCloud(uniform_cloud(50, 2, 21))
    s = evolve_closed_form(x, 10 ** 6)
    assert np.all(np.isfinite(s.coords)) and math.isfinite(s.logmag)
    p = predicted_state(coefficients(x), 10 ** 6)
    assert np.max(np.abs(s.coords - p.coords)) <= 1e-9
    assert s.logmag == pytest.approx(p.logmag, rel=1e-12)


@pytest.mark.parametrize("n", [4, 5, 13])
def test_closed_form_degenerate_start(n):
    s = evolve_closed_form(PointCloud(np.full((n, 2), 0.7)), 3)
    assert s.degenerate and s.t == 3
    assert evolve_iterative(PointCloud(np.full((n, 2), 0.7)), 3).degenerate


def test_closed_form_keeps_absent_mode_absent():
    # alternating sum exactly zero: only the sqrt(2) shell survives for n = 4
    x = PointCloud([[0.5, 0.25], [-0.125, 1.0], [0.75, -0.5], [1.375, -1.25]])
    assert not np.any(np.array([1, -1, 1, -1]) @ x.coords)
    s200, s400 = evolve_closed_form(x, 200), evolve_closed_form(x, 400)
    assert (s400.logmag - s200.logmag) / 200 == pytest.approx(0.5 * math.log(2), abs=1e-14)
