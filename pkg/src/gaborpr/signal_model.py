"""Finite Shannon-coefficient model of bandlimited signals.

A signal with bandwidth ``B`` and coefficients ``c_k`` (``k = -K..K``) has

    Ff(xi) = sum_k c_k exp(-pi i k xi / B)     for |xi| <= B, else 0,
    f(t)   = 2B sum_k c_k sinc(2B t - k),

so that ``f(k / 2B) = 2B c_k`` and ``||f||^2 = 2B sum_k |c_k|^2``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class BandlimitedSignal:
    """Element of the Paley-Wiener space parametrized by Shannon coefficients.

    Parameters
    ----------
    bandwidth : float
        ``B > 0``; the Fourier transform is supported in ``[-B, B]``.
    coeffs : array_like of complex
        Coefficients ordered ``c_{-K}, ..., c_K`` (odd length).
    """

    bandwidth: float
    coeffs: np.ndarray

    def __post_init__(self):
        B = float(self.bandwidth)
        if not (B > 0 and math.isfinite(B)):
            raise ValueError(f"bandwidth must be positive and finite, got {self.bandwidth!r}")
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size % 2 != 1:
            raise ValueError("coefficient vector must have odd length 2K+1")
        c.setflags(write=False)
        object.__setattr__(self, "bandwidth", B)
        object.__setattr__(self, "coeffs", c)

    @property
    def K(self) -> int:
        return (self.coeffs.size - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    @property
    def nodes(self) -> np.ndarray:
        """Time-domain sample positions ``k / 2B`` carried by each coefficient."""
        return self.indices / (2.0 * self.bandwidth)

    def norm(self) -> float:
        """L2 norm from the coefficients (Parseval)."""
        return math.sqrt(2.0 * self.bandwidth) * float(np.linalg.norm(self.coeffs))

    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))

    def scaled(self, factor: complex) -> "BandlimitedSignal":
        return BandlimitedSignal(self.bandwidth, factor * self.coeffs)

    def padded(self, K: int) -> "BandlimitedSignal":
        """The same signal with its coefficient vector zero-padded to half-width ``K``."""
        if K < self.K:
            raise ValueError(f"cannot pad K={self.K} down to {K}")
        pad = K - self.K
        return BandlimitedSignal(self.bandwidth, np.pad(self.coeffs, (pad, pad)))

    def __call__(self, t):
        return time_eval(self, t)

    def __repr__(self):
        return f"BandlimitedSignal(bandwidth={self.bandwidth!r}, K={self.K})"

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "bandwidth": self.bandwidth,
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BandlimitedSignal":
        coeffs = [complex(re, im) for re, im in data["coeffs"]]
        return cls(float(data["bandwidth"]), np.array(coeffs, dtype=complex))

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "BandlimitedSignal":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class PhaseAlignment:
    """Optimal global phase between two signals.

    ``alpha`` lies in ``(-pi, pi]`` and ``distance`` is the L2 distance
    ``||f - exp(i alpha) g||`` after alignment.
    """

    alpha: float
    distance: float


def fourier_eval(signal: BandlimitedSignal, xi):
    """Fourier transform ``Ff(xi)``; exactly zero outside ``[-B, B]``."""
    xi_arr = np.asarray(xi, dtype=float)
    B = signal.bandwidth
    phase = np.exp(-1j * np.pi * np.multiply.outer(xi_arr, signal.indices) / B)
    out = phase @ signal.coeffs
    out = np.where(np.abs(xi_arr) <= B, out, 0.0)
    return out[()] if out.ndim == 0 else out


def time_eval(signal: BandlimitedSignal, t):
    """Time-domain value ``f(t) = 2B sum_k c_k sinc(2Bt - k)``."""
    t_arr = np.asarray(t, dtype=float)
    B = signal.bandwidth
    basis = np.sinc(np.subtract.outer(2.0 * B * t_arr, signal.indices))
    out = 2.0 * B * (basis @ signal.coeffs)
    return out[()] if out.ndim == 0 else out


def _wrap_angle(alpha: float) -> float:
    a = math.remainder(alpha, 2.0 * math.pi)
    # remainder maps to [-pi, pi]; the half-open convention keeps +pi
    return math.pi if a <= -math.pi else a


def align_lengths(f: BandlimitedSignal, g: BandlimitedSignal):
    """Zero-pad the shorter coefficient vector so both share ``K``."""
    if f.bandwidth != g.bandwidth:
        raise ValueError(f"bandwidth mismatch: {f.bandwidth} vs {g.bandwidth}")
    K = max(f.K, g.K)
    return f.padded(K), g.padded(K)


def phase_align(f: BandlimitedSignal, g: BandlimitedSignal) -> PhaseAlignment:
    """Best global phase ``alpha`` minimizing ``||f - exp(i alpha) g||``.

    ``alpha = arg <c_f, c_g>``, with ``alpha = 0`` when the inner product
    vanishes.
    """
    f, g = align_lengths(f, g)
    inner = np.vdot(g.coeffs, f.coeffs)  # sum c_f conj(c_g)
    alpha = 0.0 if inner == 0 else _wrap_angle(float(np.angle(inner)))
    diff = f.coeffs - np.exp(1j * alpha) * g.coeffs
    distance = math.sqrt(2.0 * f.bandwidth) * float(np.linalg.norm(diff))
    return PhaseAlignment(alpha=alpha, distance=distance)


def random_signal(K: int, B: float, seed: int, real_only: bool = False) -> BandlimitedSignal:
    """Unit-norm signal with i.i.d. Gaussian coefficients, deterministic in ``seed``."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    rng = np.random.default_rng(seed)
    n = 2 * K + 1
    if real_only:
        c = rng.standard_normal(n).astype(complex)
    else:
        c = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
    c /= math.sqrt(2.0 * B) * np.linalg.norm(c)
    return BandlimitedSignal(B, c)


def zero_signal(K: int, B: float) -> BandlimitedSignal:
    return BandlimitedSignal(B, np.zeros(2 * K + 1, dtype=complex))
