import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate
from scipy.special import erf

from gaborpr.errors import ExponentOverflowError
from gaborpr.signal_model import BandlimitedSignal, random_signal, zero_signal
from gaborpr.transforms import (
    KernelQuery,
    band_gaussian_kernel,
    bargmann_derivative,
    bargmann_fourier_symmetry_residual,
    bargmann_quadrature_oracle,
    bargmann_relation_residual,
    bargmann_transform,
    convolution_form_residual,
    gabor_quadrature_oracle,
    gabor_transform,
    kernel,
    kernel_derivative,
)


def _kernel_quadrature(u, omega, B):
    with warnings.catch_warnings():
        # roundoff at the requested level is expected and harmless here
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(lambda xi: np.exp(-np.pi * (xi - omega) ** 2 + 2j * np.pi * xi * u),
                                -B, B, epsabs=1e-15, epsrel=1e-14, limit=500, complex_func=True)
    return val


def test_kernel_at_origin():
    assert band_gaussian_kernel(KernelQuery(0, 0.0, 1.0)) == pytest.approx(erf(math.sqrt(math.pi)), abs=1e-15)
    assert abs(band_gaussian_kernel(KernelQuery(0, 0.0, 1.0)) - 0.9879) < 1e-4


def test_kernel_complex_point_matches_quadrature():
    u = 0.3 + 0.2j
    ref = _kernel_quadrature(u, 0.5, 1.0)
    assert abs(band_gaussian_kernel(KernelQuery(u, 0.5, 1.0)) - ref) <= 1e-10 * abs(ref)


def test_kernel_wide_band_limit():
    for u in (0.0, 0.4, -1.3):
        B = 6.0
        full = math.exp(-math.pi * u * u)
        assert abs(kernel(u, 0.0, B) - full) <= math.exp(-math.pi * (B - 0) ** 2) + 1e-15


@pytest.mark.parametrize("omega", [-2.5, -0.3, 0.0, 0.8, 3.0])
@pytest.mark.parametrize("u", [0.0, 0.7, -2.2 + 0.4j, 1.5 - 1.1j, 4.0 + 0.9j])
def test_kernel_grid_against_quadrature(u, omega):
    ref = _kernel_quadrature(u, omega, 1.0)
    assert abs(kernel(u, omega, 1.0) - ref) <= 1e-12 * max(abs(ref), 1e-3)


def test_kernel_derivative_matches_difference_quotient():
    u = 0.4 - 0.3j
    h = 1e-5
    fd = (kernel(u + h, 0.2, 1.0) - kernel(u - h, 0.2, 1.0)) / (2 * h)
    assert abs(kernel_derivative(u, 0.2, 1.0) - fd) <= 1e-8


def test_kernel_overflow_guard():
    with pytest.raises(ExponentOverflowError) as info:
        kernel(200j, 0.0, 1.0)
    assert info.value.exponent > info.value.limit


def test_kernel_query_validates():
    with pytest.raises(ValueError):
        KernelQuery(0, 0.0, -1.0)


def test_gabor_examples(c0, seed7):
    assert gabor_transform(zero_signal(3, 1.0), 0.4, 0.1) == 0
    val = gabor_transform(c0, 0.0, 0.0)
    assert val == pytest.approx(2 ** 0.25 * erf(math.sqrt(math.pi)), abs=1e-15)
    assert abs(val - 1.1748) < 1e-4
    assert abs(val - gabor_quadrature_oracle(c0, 0.0, 0.0)) <= 1e-12
    ref = gabor_quadrature_oracle(seed7, 0.25, 0.4)
    assert abs(gabor_transform(seed7, 0.25, 0.4) - ref) <= 1e-9 * abs(ref)


def test_gabor_deep_tail_has_only_algebraic_decay(c0):
    # Ff jumps at the band edges, so |Gf(x, 0)| decays like 1/x, not like a Gaussian
    closed = gabor_transform(c0, 10.0, 0.0)
    oracle = gabor_quadrature_oracle(c0, 10.0, 0.0)
    assert abs(closed - oracle) <= 1e-12
    bound = 2 ** 0.25 * 2 / (2 * math.pi * 10.0)
    assert abs(oracle) <= bound
    assert abs(oracle) > math.exp(-25 * math.pi) * 10


def test_oracles_of_zero_signal():
    z = zero_signal(2, 1.0)
    assert gabor_quadrature_oracle(z, 1.0, 0.3) == 0
    assert bargmann_quadrature_oracle(z, 1j) == 0


def test_bargmann_examples(seed7):
    assert bargmann_transform(zero_signal(1, 1.0), 0.2 + 0.1j) == 0
    z = 0.3 + 0.7j
    ref = bargmann_quadrature_oracle(seed7, z)
    assert abs(bargmann_transform(seed7, z) - ref) <= 1e-9 * abs(ref)
    assert bargmann_relation_residual(seed7, 0.5, -0.25) <= 1e-10


def test_bargmann_cauchy_riemann():
    rng = np.random.default_rng(3)
    s = random_signal(4, 1.0, 3)
    h = 1e-4
    for z in rng.uniform(-2, 2, 50) + 1j * rng.uniform(-2, 2, 50):
        d_dx = (bargmann_transform(s, z + h) - bargmann_transform(s, z - h)) / (2 * h)
        d_dy = (bargmann_transform(s, z + 1j * h) - bargmann_transform(s, z - 1j * h)) / (2 * h)
        scale = max(1.0, abs(d_dx))
        assert abs(d_dy - 1j * d_dx) <= 1e-6 * scale


def test_bargmann_derivative(seed7):
    z = -0.6 + 0.45j
    h = 1e-5
    fd = (bargmann_transform(seed7, z + h) - bargmann_transform(seed7, z - h)) / (2 * h)
    assert abs(bargmann_derivative(seed7, z) - fd) <= 1e-8 * max(1, abs(fd))


def test_fourier_symmetry_examples():
    assert bargmann_fourier_symmetry_residual(zero_signal(2, 1.0), 1 + 1j) == 0
    s = random_signal(3, 1.0, 3)
    assert bargmann_fourier_symmetry_residual(s, 0.2) <= 1e-8
    assert bargmann_fourier_symmetry_residual(s, -1.1 + 0.6j) <= 1e-8


def test_convolution_form_examples():
    assert convolution_form_residual(zero_signal(1, 1.0), 0.0, [0.0, 1.0]) == 0
    s = random_signal(3, 1.0, 5)
    grid = np.linspace(-2, 2, 11)
    assert convolution_form_residual(s, 0.0, grid) <= 1e-9
    assert convolution_form_residual(s, 1.5, grid) <= 1e-9


@given(st.floats(-math.pi, math.pi), st.integers(0, 1000))
def test_magnitude_gauge_invariance(alpha, seed):
    s = random_signal(3, 1.0, seed)
    x = np.linspace(-3, 3, 13)
    a = np.abs(gabor_transform(s, x, 0.3))
    b = np.abs(gabor_transform(s.scaled(np.exp(1j * alpha)), x, 0.3))
    assert np.max(np.abs(a - b)) <= 1e-12


def test_real_signal_gabor_real_at_zero_frequency():
    s = random_signal(4, 1.0, 9, real_only=True)
    x = np.linspace(-5, 5, 41)
    assert np.max(np.abs(np.imag(gabor_transform(s, x, 0.0)))) <= 1e-12


def test_gabor_transform_broadcasts(seed7):
    x = np.linspace(-1, 1, 4)
    w = np.array([[0.0], [0.5]])
    out = gabor_transform(seed7, x, w)
    assert out.shape == (2, 4)
    assert out[1, 2] == pytest.approx(gabor_transform(seed7, x[2], 0.5), abs=1e-16)


def test_non_unit_bandwidth_against_oracle():
    s = random_signal(2, 2.5, 4)
    for x, w in [(0.1, 0.0), (-0.7, 1.9), (1.3, -2.8)]:
        ref = gabor_quadrature_oracle(s, x, w)
        assert abs(gabor_transform(s, x, w) - ref) <= 1e-9 * max(abs(ref), 1e-3)
