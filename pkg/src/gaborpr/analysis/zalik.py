"""Checkable hypotheses of Zalik's completeness criterion for shifted Gaussians.

For ``c_k = i z0 - omega0 - 2 k tau`` the report tracks the symmetric partial
sums of ``1 / |c_k|``, fits their growth against ``log N`` over the last
decade, and locates where the cone condition
``|Re(c_k - 1/2)| >= delta |c_k - 1/2|`` holds at level ``1/2``.
Divergence is a fitted statement, not a proof.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["ZalikReport", "zalik_centers", "zalik_report"]

CONE_LEVEL = 0.5


@dataclass(frozen=True, eq=False)
class ZalikReport:
    partial_sums: np.ndarray
    delta: float
    N0: int | None
    divergence_verdict: bool
    slope: float = field(default=math.nan, repr=False)
    intercept: float = field(default=math.nan, repr=False)

    def to_dict(self) -> dict:
        return {
            "partial_sums": [float(v) for v in self.partial_sums],
            "delta": self.delta,
            "N0": self.N0,
            "divergence_verdict": self.divergence_verdict,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict())


def zalik_centers(z0: complex, omega0: float, tau: float, N: int) -> np.ndarray:
    """``c_k`` for ``k = -N..N``."""
    k = np.arange(-N, N + 1)
    return 1j * complex(z0) - omega0 - 2.0 * k * tau


def zalik_report(z0: complex, omega0: float, tau: float, N: int) -> ZalikReport:
    """Partial sums, cone constant and log-growth verdict for the centres ``c_k``.

    ``partial_sums[m - 1]`` is the sum of ``1/|c_k|`` over ``|k| <= m``,
    zero centres skipped. ``N0`` is the smallest index with the cone
    condition at level 1/2 for every ``N0 <= |k| <= N`` (``None`` if no such
    index) and ``delta`` is the infimum of the cone ratio over that range.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    N = int(N)
    if N < 10:
        raise ValueError("N must be at least 10")
    c = zalik_centers(z0, omega0, tau, N)
    mag = np.abs(c)
    inv = np.divide(1.0, mag, out=np.zeros_like(mag), where=mag > 0)
    # pair k and -k: index N + m and N - m
    m = np.arange(1, N + 1)
    partial = inv[N] + np.cumsum(inv[N + m] + inv[N - m])

    shifted = c - 0.5
    amp = np.abs(shifted)
    ratio = np.divide(np.abs(shifted.real), amp, out=np.zeros_like(amp), where=amp > 0)
    # worst ratio over |k| = m, then over m..N
    per_level = np.minimum(ratio[N + m], ratio[N - m])
    tail_min = np.minimum.accumulate(per_level[::-1])[::-1]
    ok = np.nonzero(tail_min >= CONE_LEVEL)[0]
    if ok.size:
        N0 = int(ok[0]) + 1
        delta = float(min(tail_min[ok[0]], 1.0))
    else:
        N0, delta = None, float(max(per_level[-1], np.finfo(float).tiny))

    lo = max(1, N // 10)
    xs = np.log(m[lo - 1:])
    ys = partial[lo - 1:]
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    spread = ys[-1] - ys[0]
    divergent = bool(slope > 0 and spread > 0 and np.max(np.abs(resid)) <= 1e-2 * spread)
    return ZalikReport(partial, delta, N0, divergent, float(slope), float(intercept))
