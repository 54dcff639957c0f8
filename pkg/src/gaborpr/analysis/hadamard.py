"""Phase rigidity of Bargmann transforms with equal moduli on two lines.

If ``|Bf| = |Bg|`` on ``R`` and ``R + i tau`` and the zero sets agree, then
``Bf = exp(Q) Bg`` with ``Q`` a quadratic; equal moduli on both lines force
``Q = i alpha``. The check fits ``log(Bf / Bg)`` by a complex quadratic
and reports its imaginary coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import HypothesisError, ZeroFloorError
from ..signal_model import BandlimitedSignal, _wrap_angle
from ..transforms import bargmann_transform

__all__ = ["PhaseCheckResult", "hadamard_phase_check"]


@dataclass(frozen=True)
class PhaseCheckResult:
    """``Q(z) = i (alpha + lambda1 z + lambda2 z^2)`` and the fit residual."""

    alpha: float
    lambda1: float
    lambda2: float
    max_residual: float


def _line_magnitudes(values, z):
    # Gabor-scale modulus: |Bf(z)| exp(-pi |z|^2 / 2) = |Gf(Re z, -Im z)|
    return np.abs(values) * np.exp(-np.pi * np.abs(z) ** 2 / 2)


def hadamard_phase_check(f: BandlimitedSignal, g: BandlimitedSignal, tau: float, grid,
                         hypothesis_tolerance: float = 1e-8,
                         zero_floor: float = 1e-6) -> PhaseCheckResult:
    """Recover the constant phase relating ``Bf`` and ``Bg``.

    Parameters
    ----------
    f, g : BandlimitedSignal
        Signals sharing ``B``.
    tau : float
        Offset of the second line ``R + i tau``.
    grid : array_like of float
        Real abscissae used on both lines.
    hypothesis_tolerance : float
        Allowed difference of the Gabor-scale moduli, relative to the larger norm.
    zero_floor : float
        Points where the Gabor-scale ``|Bg|`` is below ``zero_floor`` times
        its maximum are excluded from the fit.

    Raises
    ------
    HypothesisError
        The moduli differ on either line.
    ZeroFloorError
        No grid point on the real line is above the floor.
    """
    if f.bandwidth != g.bandwidth:
        raise ValueError("signals must share the bandwidth")
    if not tau > 0:
        raise ValueError("tau must be positive")
    x = np.unique(np.asarray(grid, dtype=float).ravel())
    if x.size < 3:
        raise ValueError("grid needs at least three distinct points")
    lower, upper = x.astype(complex), x + 1j * tau
    Fl, Gl = bargmann_transform(f, lower), bargmann_transform(g, lower)
    Fu, Gu = bargmann_transform(f, upper), bargmann_transform(g, upper)

    scale = max(f.norm(), g.norm())
    if scale == 0:
        return PhaseCheckResult(0.0, 0.0, 0.0, 0.0)
    gap = max(np.max(np.abs(_line_magnitudes(Fl, lower) - _line_magnitudes(Gl, lower))),
              np.max(np.abs(_line_magnitudes(Fu, upper) - _line_magnitudes(Gu, upper))))
    if gap > hypothesis_tolerance * scale:
        raise HypothesisError(f"moduli differ by {gap:.3g} on the lines (allowed "
                              f"{hypothesis_tolerance * scale:.3g})")

    ml, mu = _line_magnitudes(Gl, lower), _line_magnitudes(Gu, upper)
    keep_l = ml > zero_floor * ml.max()
    keep_u = mu > zero_floor * mu.max()
    if not np.any(keep_l):
        raise ZeroFloorError("all real-line grid points are below the zero floor")

    # unknowns (Re q0, Re q1, Re q2, Im q0, Im q1, Im q2) of Q = q0 + q1 z + q2 z^2
    xl = x[keep_l]
    hl = Fl[keep_l] / Gl[keep_l]
    one, zero = np.ones_like(xl), np.zeros_like(xl)
    rows = [np.column_stack([one, xl, xl ** 2, zero, zero, zero]),
            np.column_stack([zero, zero, zero, one, xl, xl ** 2])]
    rhs = [np.log(np.abs(hl)), np.unwrap(np.angle(hl))]
    if np.any(keep_u):
        xu = x[keep_u]
        hu = Fu[keep_u] / Gu[keep_u]
        o = np.ones_like(xu)
        # Re Q(x + i tau)
        rows.append(np.column_stack([o, xu, xu ** 2 - tau ** 2, 0 * o, -tau * o, -2 * tau * xu]))
        rhs.append(np.log(np.abs(hu)))
    coef = np.linalg.lstsq(np.vstack(rows), np.concatenate(rhs), rcond=None)[0]
    alpha = _wrap_angle(float(coef[3]))
    rot = np.exp(1j * alpha)
    residual = max(float(np.max(np.abs(Fl - rot * Gl))), float(np.max(np.abs(Fu - rot * Gu))))
    return PhaseCheckResult(alpha, float(coef[4]), float(coef[5]), residual)
