import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from gaborpr.signal_model import (
    BandlimitedSignal,
    align_lengths,
    fourier_eval,
    phase_align,
    random_signal,
    time_eval,
    zero_signal,
)


def _inversion_quadrature(signal, t):
    B = signal.bandwidth
    val, _ = integrate.quad(lambda xi: complex(fourier_eval(signal, xi)) * np.exp(2j * np.pi * t * xi),
                            -B, B, epsabs=1e-14, epsrel=1e-14, limit=500, complex_func=True)
    return val


def test_fourier_eval_examples(c0):
    assert fourier_eval(zero_signal(2, 1.0), 0.3) == 0
    assert fourier_eval(c0, 0.5) == 1
    assert fourier_eval(c0, 1.5) == 0
    assert fourier_eval(c0, -1.0) == 1


def test_fourier_eval_zero_outside_band(seed7):
    xi = np.array([-3.0, -1.0000001, 1.0000001, 2.5])
    assert np.all(fourier_eval(seed7, xi) == 0)


def test_time_eval_examples(c0):
    assert time_eval(c0, 0.0) == pytest.approx(2.0, abs=1e-15)
    assert abs(time_eval(c0, 0.5)) <= 1e-16


def test_time_eval_matches_inversion_quadrature(seed7):
    t = 0.37
    ref = _inversion_quadrature(seed7, t)
    assert abs(time_eval(seed7, t) - ref) <= 1e-10 * abs(ref)


def test_time_eval_node_values(seed7):
    vals = time_eval(seed7, seed7.nodes)
    assert np.allclose(vals, 2 * seed7.bandwidth * seed7.coeffs, atol=1e-15)


def test_parseval_two_routes():
    rng = np.random.default_rng(0)
    for seed in range(200):
        K = int(rng.integers(0, 7))
        B = float(rng.uniform(0.5, 2.0))
        s = random_signal(K, B, seed).scaled(rng.uniform(0.5, 2))
        band, _ = integrate.quad(lambda xi: abs(fourier_eval(s, xi)) ** 2, -B, B,
                                 epsabs=1e-14, epsrel=1e-13, limit=500)
        assert abs(s.norm() ** 2 - band) <= 1e-10 * band


def test_real_signals_evaluate_real():
    s = random_signal(5, 1.0, 11, real_only=True)
    t = np.linspace(-10, 10, 1000)
    assert np.max(np.abs(np.imag(time_eval(s, t)))) <= 1e-12
    assert s.is_real()


def test_random_signal_examples():
    s = random_signal(0, 1.0, 1, real_only=True)
    assert abs(abs(s.coeffs[0]) - 1 / math.sqrt(2)) <= 1e-15
    assert abs(random_signal(3, 1.0, 7).norm() - 1) <= 1e-12
    assert np.array_equal(random_signal(3, 1.0, 7).coeffs, random_signal(3, 1.0, 7).coeffs)
    assert not np.array_equal(random_signal(3, 1.0, 7).coeffs, random_signal(3, 1.0, 8).coeffs)


def test_random_signal_rejects_negative_K():
    with pytest.raises(ValueError):
        random_signal(-1, 1.0, 0)


def test_signal_validation():
    with pytest.raises(ValueError):
        BandlimitedSignal(0.0, [1.0])
    with pytest.raises(ValueError):
        BandlimitedSignal(1.0, [1.0, 2.0])
    s = BandlimitedSignal(1.0, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5


def test_phase_align_examples(seed7, c0):
    same = phase_align(seed7, seed7)
    assert same.alpha == pytest.approx(0.0, abs=1e-15) and same.distance <= 1e-15
    rot = phase_align(seed7, seed7.scaled(np.exp(-1j * np.pi / 3)))
    assert rot.alpha == pytest.approx(np.pi / 3, abs=1e-14)
    assert rot.distance <= 1e-14
    zero_c0 = BandlimitedSignal(1.0, [0.0])
    assert phase_align(c0, zero_c0).distance == pytest.approx(math.sqrt(2), abs=1e-15)
    assert phase_align(c0, zero_c0).alpha == 0.0


def test_phase_align_tie_at_pi(seed7):
    assert phase_align(seed7, seed7.scaled(-1)).alpha == math.pi


def test_phase_align_pads_shorter(seed7):
    short = BandlimitedSignal(1.0, [seed7.coeffs[3]])
    res = phase_align(seed7, short)
    f, g = align_lengths(seed7, short)
    assert f.K == g.K == 3
    expected = math.sqrt(2) * np.linalg.norm(np.delete(seed7.coeffs, 3))
    assert res.distance == pytest.approx(expected, rel=1e-14)


def test_align_lengths_rejects_bandwidth_mismatch(seed7):
    with pytest.raises(ValueError):
        align_lengths(seed7, random_signal(3, 2.0, 7))


@given(st.floats(-10, 10), st.integers(0, 10_000))
def test_phase_align_gauge_invariant(alpha, seed):
    f = random_signal(3, 1.0, seed)
    g = random_signal(2, 1.0, seed + 1)
    d1 = phase_align(f, g).distance
    d2 = phase_align(f, g.scaled(np.exp(1j * alpha))).distance
    assert abs(d1 - d2) <= 1e-12


@given(st.floats(-math.pi, math.pi), st.integers(0, 10_000))
def test_phase_align_minimizes(alpha, seed):
    f = random_signal(2, 1.0, seed)
    g = random_signal(2, 1.0, seed + 7)
    best = phase_align(f, g)
    other = math.sqrt(2) * np.linalg.norm(f.coeffs - np.exp(1j * alpha) * g.coeffs)
    assert best.distance <= other + 1e-12
    assert -math.pi < best.alpha <= math.pi


def test_json_round_trip(seed7):
    text = seed7.dumps()
    back = BandlimitedSignal.loads(text)
    assert back.bandwidth == seed7.bandwidth
    assert np.array_equal(back.coeffs, seed7.coeffs)
    assert set(seed7.to_dict()) == {"bandwidth", "coeffs"}


def test_padded_preserves_signal(seed7):
    p = seed7.padded(5)
    t = np.linspace(-3, 3, 17)
    assert p.K == 5
    assert np.allclose(time_eval(p, t), time_eval(seed7, t), atol=1e-15)
    with pytest.raises(ValueError):
        seed7.padded(2)
