"""Single-bin non-uniqueness: ``|G(h1 + i h2)| = |G(h1 - i h2)|`` at ``omega = 0``.

For real ``h1, h2`` the window and ``Gh_j(x, 0)`` are real, so the two
combinations have conjugate Gabor transforms on the zero-frequency line.
"""

from __future__ import annotations

import numpy as np

from ..signal_model import BandlimitedSignal, align_lengths

__all__ = ["counterexample_pair"]


def counterexample_pair(h1: BandlimitedSignal, h2: BandlimitedSignal, rtol: float = 1e-12):
    """Return ``(u, v) = (h1 + i h2, h1 - i h2)``.

    Raises
    ------
    ValueError
        Either input has non-real coefficients, the bandwidths differ, or
        the inputs are proportional (then ``u`` and ``v`` agree up to phase).
    """
    if not (h1.is_real() and h2.is_real()):
        raise ValueError("h1 and h2 must have real coefficients")
    h1, h2 = align_lengths(h1, h2)
    a, b = h1.coeffs.real, h2.coeffs.real
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    # |a|^2 |b|^2 - (a.b)^2 = |a ^ b|^2
    wedge2 = max(na * na * nb * nb - float(a @ b) ** 2, 0.0)
    if na == 0 or nb == 0 or np.sqrt(wedge2) <= rtol * na * nb:
        raise ValueError("h1 and h2 are proportional; the pair would be equivalent")
    u = BandlimitedSignal(h1.bandwidth, a + 1j * b)
    v = BandlimitedSignal(h1.bandwidth, a - 1j * b)
    return u, v
