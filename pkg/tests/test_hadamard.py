import math

import numpy as np
import pytest

from gaborpr.analysis import hadamard_phase_check
from gaborpr.errors import HypothesisError, ZeroFloorError
from gaborpr.signal_model import random_signal, zero_signal

GRID = np.linspace(-2, 2, 81)


def test_recovers_rotation(seed7):
    res = hadamard_phase_check(seed7, seed7.scaled(np.exp(-0.7j)), 0.5, GRID)
    assert abs(res.alpha - 0.7) <= 1e-9
    assert abs(res.lambda1) <= 1e-9 and abs(res.lambda2) <= 1e-9
    assert res.max_residual <= 1e-8


def test_identity(seed7):
    res = hadamard_phase_check(seed7, seed7, 0.5, GRID)
    assert res.alpha == pytest.approx(0.0, abs=1e-12)
    assert res.max_residual <= 1e-12


def test_random_alpha_sweep():
    rng = np.random.default_rng(4)
    for trial in range(20):
        f = random_signal(int(rng.integers(1, 7)), 1.0, 500 + trial)
        alpha = float(rng.uniform(-math.pi, math.pi))
        res = hadamard_phase_check(f, f.scaled(np.exp(-1j * alpha)), 0.5, GRID)
        assert abs(math.remainder(res.alpha - alpha, 2 * math.pi)) <= 1e-9
        assert abs(res.lambda1) <= 1e-8 and abs(res.lambda2) <= 1e-8
        assert res.max_residual <= 1e-8


def test_independent_signals_rejected(seed7):
    with pytest.raises(HypothesisError):
        hadamard_phase_check(seed7, random_signal(3, 1.0, 8), 0.5, GRID)


def test_conjugate_flip_fails_on_second_line():
    # u and v from real parts agree in modulus on the real line only
    h1 = random_signal(3, 1.0, 1, real_only=True).coeffs.real
    h2 = random_signal(3, 1.0, 2, real_only=True).coeffs.real
    from gaborpr.signal_model import BandlimitedSignal
    u, v = BandlimitedSignal(1.0, h1 + 1j * h2), BandlimitedSignal(1.0, h1 - 1j * h2)
    with pytest.raises(HypothesisError):
        hadamard_phase_check(u, v, 0.5, GRID)


def test_degenerate_inputs(seed7):
    res = hadamard_phase_check(zero_signal(2, 1.0), zero_signal(2, 1.0), 0.5, GRID)
    assert res.max_residual == 0.0
    with pytest.raises(ValueError):
        hadamard_phase_check(seed7, seed7, 0.0, GRID)
    with pytest.raises(ValueError):
        hadamard_phase_check(seed7, seed7, 0.5, [0.0, 1.0])
    with pytest.raises(ZeroFloorError):
        hadamard_phase_check(seed7, seed7, 0.5, GRID, zero_floor=2.0)
