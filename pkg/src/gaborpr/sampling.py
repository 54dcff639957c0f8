"""Two-bin magnitude sampling on the lattice (1/4B)Z and Shannon recovery.

For a model signal every slice ``x -> |Gf(x, omega)|^2`` is bandlimited to
``[-2B, 2B]``, so samples at step ``1/(4B)`` determine it through the sinc
series. Because ``Ff`` has jumps at ``+-B`` the slices decay only like
``1/x^2``; the truncation rule below uses a rigorous envelope of that
order (integration by parts over the band).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.signal import windows

from .errors import TruncationError
from .signal_model import BandlimitedSignal
from .transforms import FOURTH_ROOT_2, gabor_transform

__all__ = [
    "MeasurementGrid",
    "MagnitudeSamples",
    "rational_bandwidth",
    "magnitude_envelope",
    "truncation_tail_bound",
    "choose_truncation",
    "sample_magnitudes",
    "sinc_interpolate",
    "shannon_interpolate",
    "slice_window",
    "spectral_leakage",
    "bandlimit_diagnostic",
]

# Explicit summation range of the tail bound; beyond it a closed form is used.
_TAIL_TERMS = 1 << 18
_MAX_INDEX = 1 << 52


def rational_bandwidth(B: float) -> Fraction:
    """Short rational equal to ``B`` as a float, else the exact binary value."""
    frac = Fraction(B).limit_denominator(1_000_000)
    return frac if float(frac) == B else Fraction(B)


@dataclass(frozen=True)
class MeasurementGrid:
    """The truncated lattice ``(n / 4B, omega_j)``, ``|n| <= N``, ``j = 0, 1``."""

    bandwidth: float
    omegas: tuple
    N: int
    step: Fraction = field(init=False)

    def __post_init__(self):
        B = float(self.bandwidth)
        if not B > 0:
            raise ValueError("bandwidth must be positive")
        w0, w1 = (float(w) for w in self.omegas)
        if not w0 < w1:
            raise ValueError(f"need omega0 < omega1, got {self.omegas!r}")
        if int(self.N) < 1:
            raise ValueError("N must be a positive integer")
        object.__setattr__(self, "bandwidth", B)
        object.__setattr__(self, "omegas", (w0, w1))
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "step", 1 / (4 * rational_bandwidth(B)))

    @property
    def tau(self) -> float:
        return self.omegas[1] - self.omegas[0]

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    @property
    def points(self) -> np.ndarray:
        """Lattice positions, each the correctly rounded value of ``n * step``."""
        p, q = self.step.numerator, self.step.denominator
        return np.array([float(Fraction(int(n) * p, q)) for n in self.indices])


@dataclass(frozen=True, eq=False)
class MagnitudeSamples:
    """Squared Gabor magnitudes ``values[j, n + N] = |Gf(n/4B, omega_j)|^2``.

    ``K`` records the coefficient half-width of the measured signal when it
    is known; reconstruction uses it as the default model size.
    """

    grid: MeasurementGrid
    values: np.ndarray
    K: int | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (2, 2 * self.grid.N + 1):
            raise ValueError(f"values must have shape (2, {2 * self.grid.N + 1}), got {v.shape}")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValueError("magnitude samples must be finite and nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def _band_variation(B: float, omega: float) -> float:
    """Endpoint values plus total variation of exp(-pi (xi-omega)^2) on [-B, B]."""
    lo = math.exp(-math.pi * (B + omega) ** 2)
    hi = math.exp(-math.pi * (B - omega) ** 2)
    tv = (2.0 - lo - hi) if -B <= omega <= B else abs(hi - lo)
    return lo + hi + tv


def magnitude_envelope(signal: BandlimitedSignal, x, omegas):
    """Upper bound on ``|Gf(x, omega)|`` valid for every ``omega`` in ``omegas``.

    Combines ``|Gf| <= ||f||`` with the per-coefficient bound
    ``|I(u, omega, B)| <= V(omega) / (2 pi |u|)``.
    """
    x = np.asarray(x, dtype=float)
    B = signal.bandwidth
    V = max(_band_variation(B, float(w)) for w in np.atleast_1d(omegas))
    dist = np.abs(np.subtract.outer(x, signal.nodes))
    with np.errstate(divide="ignore", invalid="ignore"):
        decay = np.where(dist > 0, np.abs(signal.coeffs) / dist, np.where(signal.coeffs != 0, np.inf, 0.0))
    bound = FOURTH_ROOT_2 * V / (2 * math.pi) * decay.sum(axis=-1)
    return np.minimum(bound, signal.norm())


def _envelope_constant(signal, omegas):
    V = max(_band_variation(signal.bandwidth, float(w)) for w in omegas)
    return FOURTH_ROOT_2 * V / (2 * math.pi) * float(np.abs(signal.coeffs).sum())


def _tail_profile(signal, omegas):
    """Terms ``t_m`` (m = 1..M) and the closed-form remainder function."""
    B, K = signal.bandwidth, signal.K
    m = np.arange(1, _TAIL_TERMS + 1)
    x = m / (4.0 * B)
    env2 = magnitude_envelope(signal, x, omegas) ** 2 + magnitude_envelope(signal, -x, omegas) ** 2
    terms = env2 * 2.0 / (math.pi * m)
    C = _envelope_constant(signal, omegas)

    def remainder(N):
        # both sides, envelope <= 4BC / (n - 2K), weight 2/(pi n) <= 2/(pi (n - 2K))
        return 2.0 * (4 * B * C) ** 2 / (math.pi * (N - 2 * K) ** 2)

    return terms, remainder


def truncation_tail_bound(signal: BandlimitedSignal, omegas, N: int) -> float:
    """Bound on the sinc-weighted tail dropped by truncating at ``|n| <= N``.

    Bounds ``sum_{|n|>N} s_j[n] |sinc(4Bx - n)|`` uniformly over the
    central half ``|x| <= N/(8B)`` of the sampled window, for both bins;
    this is also a bound on the truncation error of
    :func:`shannon_interpolate` there.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if not np.any(signal.coeffs):
        return 0.0
    terms, remainder = _tail_profile(signal, omegas)
    M = terms.size
    if N >= M:
        return remainder(N)
    return float(terms[N:].sum()) + remainder(M)


def choose_truncation(signal: BandlimitedSignal, omegas, tail_tolerance: float) -> int:
    """Smallest ``N`` whose :func:`truncation_tail_bound` is at most ``tail_tolerance``."""
    if not tail_tolerance > 0:
        raise ValueError("tail_tolerance must be positive")
    if not np.any(signal.coeffs):
        return 1
    terms, remainder = _tail_profile(signal, omegas)
    M = terms.size
    rem_M = remainder(M)
    # suffix[N] = sum_{m > N} t_m over the explicit range, N = 0..M
    suffix = np.concatenate([np.cumsum(terms[::-1])[::-1], [0.0]])
    bounds = suffix + rem_M
    ok = np.nonzero(bounds[1:] <= tail_tolerance)[0]
    if ok.size:
        return int(ok[0]) + 1
    B, K = signal.bandwidth, signal.K
    C = _envelope_constant(signal, omegas)
    N = 2 * K + 4 * B * C * math.sqrt(2.0 / (math.pi * tail_tolerance))
    if not N < _MAX_INDEX:
        raise TruncationError(f"tail tolerance {tail_tolerance:g} needs N ~ {N:.3g} samples")
    N = max(int(math.ceil(N)), M)
    while N > M and remainder(N - 1) <= tail_tolerance:
        N -= 1
    return N


def sample_magnitudes(signal: BandlimitedSignal, grid: MeasurementGrid) -> MagnitudeSamples:
    """``|Gf|^2`` at every lattice point of ``grid``, both bins."""
    if signal.bandwidth != grid.bandwidth:
        raise ValueError("signal and grid bandwidths differ")
    x = grid.points
    values = np.stack([np.abs(gabor_transform(signal, x, w)) ** 2 for w in grid.omegas])
    return MagnitudeSamples(grid, values, K=signal.K)


def sinc_interpolate(values, step, x, start_index=None, block=4096):
    """Cardinal series ``sum_n values[n] sinc(x/step - n)``.

    ``values`` is indexed from ``start_index`` (default: centred, ``-N``).
    """
    values = np.asarray(values, dtype=float)
    if start_index is None:
        start_index = -((values.size - 1) // 2)
    n = start_index + np.arange(values.size)
    rate = 1 / Fraction(step) if isinstance(step, Fraction) else 1.0 / step
    rate = float(rate)
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty(flat.shape)
    for s in range(0, flat.size, block):
        chunk = flat[s:s + block]
        out[s:s + block] = np.sinc(np.subtract.outer(rate * chunk, n)) @ values
    out = out.reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def shannon_interpolate(samples: MagnitudeSamples, j: int, x):
    """Reconstruct ``|Gf(x, omega_j)|^2`` from the lattice samples of bin ``j``."""
    if j not in (0, 1):
        raise ValueError("bin index must be 0 or 1")
    return sinc_interpolate(samples.values[j], samples.grid.step, x, -samples.grid.N)


def slice_window(signal: BandlimitedSignal, omega: float, tail_tolerance: float = 1e-10) -> float:
    """Half-width ``W`` with slice energy outside ``[-W, W]`` at most ``tail_tolerance``.

    Uses ``int_{|x|>W} |Gf|^4 <= 2 C^4 / (3 (W - K/2B)^3)``.
    """
    C = _envelope_constant(signal, (omega,))
    if C == 0:
        return 0.0
    return signal.K / (2 * signal.bandwidth) + (2 * C ** 4 / (3 * tail_tolerance)) ** (1 / 3)


def spectral_leakage(values, step: float, band: float) -> float:
    """Fraction of tapered-DFT amplitude mass at frequencies ``|f| > band``."""
    values = np.asarray(values, dtype=float)
    taper = windows.blackmanharris(values.size)
    mass = np.abs(np.fft.fft(values * taper))
    total = mass.sum()
    if total == 0:
        return 0.0
    freqs = np.fft.fftfreq(values.size, d=step)
    return float(mass[np.abs(freqs) > band].sum() / total)


def bandlimit_diagnostic(signal: BandlimitedSignal, omega: float, oversample_factor: int = 16,
                         window_half_width: float | None = None,
                         tail_tolerance: float = 1e-10, return_slice: bool = False):
    """Leakage of ``x -> |Gf(x, omega)|^2`` outside ``[-2B, 2B]``.

    The slice is sampled at step ``1/(mB)`` on ``[-W, W]``; ``W`` defaults to
    :func:`slice_window` and a supplied ``W`` failing that bound raises
    :class:`TruncationError`. With ``return_slice`` the sampled slice and its
    step are returned as well.
    """
    m = int(oversample_factor)
    if m < 4:
        raise ValueError("oversample_factor must be at least 4")
    B = signal.bandwidth
    step = 1.0 / (m * B)
    if not np.any(signal.coeffs):
        return (0.0, np.zeros(1), step) if return_slice else 0.0
    needed = slice_window(signal, omega, tail_tolerance)
    if window_half_width is None:
        W = needed
    elif window_half_width < needed:
        raise TruncationError(
            f"window half-width {window_half_width:g} below {needed:g} needed for tail {tail_tolerance:g}")
    else:
        W = float(window_half_width)
    n = int(math.ceil(W / step))
    x = np.arange(-n, n + 1) * step
    slice_ = np.abs(gabor_transform(signal, x, omega)) ** 2
    ratio = spectral_leakage(slice_, step, 2 * B)
    return (ratio, slice_, step) if return_slice else ratio
