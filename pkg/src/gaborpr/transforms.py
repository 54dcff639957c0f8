"""Closed-form Gabor and Bargmann transforms of model signals.

Both transforms reduce to the band-limited Gaussian kernel

    I(u, omega, B) = int_{-B}^{B} exp(-pi (xi - omega)^2) exp(2 pi i xi u) dxi,

which is entire in ``u``. Completing the square turns it into a difference
of two complex error functions; we evaluate it through the Faddeeva
function ``w(z) = exp(-z^2) erfc(-iz)`` so that every ``w`` argument lies in
the closed upper half-plane (``|w| <= 1`` there) and the only large factors
are explicit exponentials, which are range-checked.

Quadrature oracles integrate the defining integrals directly in the time
(or frequency) domain and share no code with the closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import wofz

from .errors import ExponentOverflowError, QuadratureError
from .signal_model import BandlimitedSignal, fourier_eval, time_eval

__all__ = [
    "KernelQuery",
    "band_gaussian_kernel",
    "kernel",
    "kernel_derivative",
    "gaussian_window",
    "gabor_matrix",
    "gabor_transform",
    "gabor_quadrature_oracle",
    "bargmann_transform",
    "bargmann_derivative",
    "bargmann_quadrature_oracle",
    "bargmann_relation_residual",
    "bargmann_fourier_symmetry_residual",
    "convolution_form_residual",
    "MAX_EXPONENT",
    "QUADRATURE_CUTOFF",
]

MAX_EXPONENT = 700.0
FOURTH_ROOT_2 = 2.0 ** 0.25
SQRT_PI = math.sqrt(math.pi)

# Gaussian factor below this is dropped by the quadrature oracles.
QUADRATURE_CUTOFF = 1e-20
_HALF_WINDOW = math.sqrt(-math.log(QUADRATURE_CUTOFF) / math.pi)


@dataclass(frozen=True)
class KernelQuery:
    u: complex
    omega: float
    B: float

    def __post_init__(self):
        if not self.B > 0:
            raise ValueError("B must be positive")


def gaussian_window(t):
    """The L2-normalized Gaussian ``2^(1/4) exp(-pi t^2)``."""
    return FOURTH_ROOT_2 * np.exp(-np.pi * np.asarray(t) ** 2)


def _guard(log_terms, used, max_exponent, where):
    worst = -np.inf
    for logv, mask in zip(log_terms, used):
        if np.any(mask):
            worst = max(worst, float(np.max(np.where(mask, logv.real, -np.inf))))
    if worst > max_exponent:
        raise ExponentOverflowError(worst, max_exponent, where)


def _kernel_parts(u, omega, B, max_exponent):
    u = np.asarray(u, dtype=complex)
    omega = np.asarray(omega, dtype=float)
    u, omega = np.broadcast_arrays(u, omega)

    log_g = -np.pi * u * u + 2j * np.pi * u * omega
    log_a1 = -np.pi * (B - omega) ** 2 + 2j * np.pi * u * B
    log_a2 = -np.pi * (B + omega) ** 2 - 2j * np.pi * u * B
    z1 = SQRT_PI * (u + 1j * (B - omega))
    z2 = SQRT_PI * (-u + 1j * (B + omega))
    # Im z1 + Im z2 = 2 sqrt(pi) B > 0, so at most one needs reflecting
    low1 = z1.imag < 0
    low2 = z2.imag < 0
    both_up = ~(low1 | low2)

    _guard((log_g, log_a1, log_a2), (both_up, np.ones_like(low1), np.ones_like(low1)),
           max_exponent, "band_gaussian_kernel")

    g0 = np.where(both_up, np.exp(np.where(both_up, log_g, 0)), 0)
    a1 = np.exp(log_a1)
    a2 = np.exp(log_a2)
    # reflection w(z) = 2 exp(-z^2) - w(-z) absorbs the Gaussian term exactly
    t1 = np.where(low1, -a1 * wofz(np.where(low1, -z1, 1j)), a1 * wofz(np.where(low1, 1j, z1)))
    t2 = np.where(low2, -a2 * wofz(np.where(low2, -z2, 1j)), a2 * wofz(np.where(low2, 1j, z2)))
    value = g0 - 0.5 * t1 - 0.5 * t2
    return value, a1, a2


def kernel(u, omega, B, max_exponent=MAX_EXPONENT):
    """Vectorized ``I(u, omega, B)``; broadcasts ``u`` against ``omega``."""
    value, _, _ = _kernel_parts(u, omega, B, max_exponent)
    return value[()] if value.ndim == 0 else value


def kernel_derivative(u, omega, B, max_exponent=MAX_EXPONENT):
    """``dI/du``, from ``int xi h = (omega + iu) I - (h(B) - h(-B)) / 2pi``."""
    value, a1, a2 = _kernel_parts(u, omega, B, max_exponent)
    u = np.asarray(u, dtype=complex)
    out = 2j * np.pi * (omega + 1j * u) * value - 1j * (a1 - a2)
    return out[()] if out.ndim == 0 else out


def band_gaussian_kernel(q: KernelQuery, max_exponent: float = MAX_EXPONENT) -> complex:
    """Closed-form ``int_{-B}^{B} exp(-pi (xi-omega)^2 + 2 pi i xi u) dxi``."""
    return complex(kernel(q.u, q.omega, q.B, max_exponent))


def gabor_matrix(x, omega, B: float, K: int, max_exponent=MAX_EXPONENT):
    """Matrix of the linear map ``c -> Gf(x, omega)``.

    ``x`` and ``omega`` broadcast together; the result has one trailing
    axis of length ``2K+1``.
    """
    x, omega = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(omega, dtype=float))
    nodes = np.arange(-K, K + 1) / (2.0 * B)
    u = x[..., None] - nodes
    ker = kernel(u, omega[..., None], B, max_exponent)
    return FOURTH_ROOT_2 * np.exp(-2j * np.pi * x * omega)[..., None] * ker


def gabor_transform(signal: BandlimitedSignal, x, omega, max_exponent=MAX_EXPONENT):
    """Gabor transform ``Gf(x, omega)`` with the normalized Gaussian window."""
    A = gabor_matrix(x, omega, signal.bandwidth, signal.K, max_exponent)
    out = A @ signal.coeffs
    return out[()] if np.ndim(out) == 0 else out


def _quad(func, a, b, tolerance, points=None):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(func, a, b, epsabs=tolerance, epsrel=tolerance,
                                      limit=1000, points=points, complex_func=True)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc).strip()) from exc
    return val


def _sinc_breaks(signal, a, b):
    nodes = signal.nodes
    inside = nodes[(nodes > a) & (nodes < b)]
    return list(inside) if 0 < inside.size <= 50 else None


def gabor_quadrature_oracle(signal: BandlimitedSignal, x: float, omega: float,
                            tolerance: float = 1e-12) -> complex:
    """Direct adaptive quadrature of the Gabor integral in the time domain.

    The window is cut where ``exp(-pi (t-x)^2)`` drops below
    ``QUADRATURE_CUTOFF``.
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    if not np.any(signal.coeffs):
        return 0j
    a, b = x - _HALF_WINDOW, x + _HALF_WINDOW

    def integrand(t):
        return complex(time_eval(signal, t)) * math.exp(-math.pi * (t - x) ** 2) \
            * complex(math.cos(2 * math.pi * t * omega), -math.sin(2 * math.pi * t * omega))

    return FOURTH_ROOT_2 * _quad(integrand, a, b, tolerance, _sinc_breaks(signal, a, b))


def bargmann_transform(signal: BandlimitedSignal, z, max_exponent=MAX_EXPONENT):
    """Bargmann transform ``Bf(z)``, entire in ``z``.

    ``Bf(z) = 2^(1/4) exp(pi z^2 / 2) sum_k c_k I(z - k/2B, 0, B)``. The
    result grows like ``exp(pi |z|^2 / 2)``; with ``B`` of order one the
    guard is reached near ``|z| ~ 20``.
    """
    z = np.asarray(z, dtype=complex)
    pre = np.pi * z * z / 2.0
    _guard((pre,), (np.ones(z.shape, bool),), max_exponent, "bargmann_transform")
    ker = kernel(z[..., None] - signal.nodes, 0.0, signal.bandwidth, max_exponent)
    out = FOURTH_ROOT_2 * np.exp(pre) * (ker @ signal.coeffs)
    return out[()] if out.ndim == 0 else out


def bargmann_derivative(signal: BandlimitedSignal, z, max_exponent=MAX_EXPONENT):
    """Complex derivative of :func:`bargmann_transform`."""
    z = np.asarray(z, dtype=complex)
    pre = np.pi * z * z / 2.0
    _guard((pre,), (np.ones(z.shape, bool),), max_exponent, "bargmann_derivative")
    u = z[..., None] - signal.nodes
    B = signal.bandwidth
    s = kernel(u, 0.0, B, max_exponent) @ signal.coeffs
    ds = kernel_derivative(u, 0.0, B, max_exponent) @ signal.coeffs
    out = FOURTH_ROOT_2 * np.exp(pre) * (np.pi * z * s + ds)
    return out[()] if out.ndim == 0 else out


def bargmann_quadrature_oracle(signal: BandlimitedSignal, z: complex,
                               tolerance: float = 1e-12) -> complex:
    """Quadrature of ``2^(1/4) int f(t) exp(2 pi t z - pi t^2 - pi z^2/2) dt``."""
    if not np.any(signal.coeffs):
        return 0j
    z = complex(z)
    # |exp(2 pi t z - pi t^2)| = exp(-pi (t - Re z)^2 + pi (Re z)^2)
    a, b = z.real - _HALF_WINDOW, z.real + _HALF_WINDOW

    def integrand(t):
        return complex(time_eval(signal, t)) * np.exp(2 * math.pi * t * z - math.pi * t * t
                                                      - math.pi * z * z / 2)

    return FOURTH_ROOT_2 * _quad(integrand, a, b, tolerance, _sinc_breaks(signal, a, b))


def bargmann_relation_residual(signal: BandlimitedSignal, x, omega):
    """``|Gf(x,-omega) - exp(pi i x omega) Bf(x + i omega) exp(-pi/2 (x^2 + omega^2))|``."""
    x = np.asarray(x, dtype=float)
    omega = np.asarray(omega, dtype=float)
    lhs = gabor_transform(signal, x, -omega)
    rhs = (np.exp(1j * np.pi * x * omega) * bargmann_transform(signal, x + 1j * omega)
           * np.exp(-np.pi / 2 * (x * x + omega * omega)))
    return np.abs(lhs - rhs)


def bargmann_fourier_symmetry_residual(signal: BandlimitedSignal, z: complex,
                                       tolerance: float = 1e-12) -> float:
    """``|Bf(-iz) - B(Ff)(z)|`` with the right side by band quadrature."""
    z = complex(z)
    if not np.any(signal.coeffs):
        return 0.0
    B = signal.bandwidth

    def integrand(xi):
        return complex(fourier_eval(signal, xi)) * np.exp(2 * math.pi * xi * z - math.pi * xi * xi
                                                          - math.pi * z * z / 2)

    rhs = FOURTH_ROOT_2 * _quad(integrand, -B, B, tolerance)
    return abs(complex(bargmann_transform(signal, -1j * z)) - rhs)


def convolution_form_residual(signal: BandlimitedSignal, omega: float, grid,
                              tolerance: float = 1e-12) -> float:
    """Max over ``grid`` of ``| |phi * M_{-omega} f|(x) - |Gf(x, omega)| |``."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if not np.any(signal.coeffs) or grid.size == 0:
        return 0.0
    closed = np.abs(gabor_transform(signal, grid, omega))
    worst = 0.0
    for x, g in zip(grid, closed):
        a, b = x - _HALF_WINDOW, x + _HALF_WINDOW

        def integrand(t, x=x):
            # phi(x - t) f(t) exp(-2 pi i omega t)
            return complex(gaussian_window(x - t)) * complex(time_eval(signal, t)) \
                * np.exp(-2j * math.pi * omega * t)

        conv = _quad(integrand, a, b, tolerance, _sinc_breaks(signal, a, b))
        worst = max(worst, abs(abs(conv) - g))
    return worst
