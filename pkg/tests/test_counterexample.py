import numpy as np
import pytest

from gaborpr.analysis import counterexample_pair
from gaborpr.signal_model import BandlimitedSignal, phase_align, random_signal
from gaborpr.transforms import gabor_transform


@pytest.fixture
def pair():
    return counterexample_pair(random_signal(3, 1.0, 1, real_only=True),
                               random_signal(3, 1.0, 2, real_only=True))


def test_construction(pair):
    u, v = pair
    h1 = random_signal(3, 1.0, 1, real_only=True).coeffs
    h2 = random_signal(3, 1.0, 2, real_only=True).coeffs
    assert np.array_equal(u.coeffs, h1 + 1j * h2.real)
    assert np.array_equal(v.coeffs, h1 - 1j * h2.real)


def test_single_bin_blind_two_bins_not(pair):
    u, v = pair
    x = np.linspace(-5, 5, 101)
    same = np.abs(np.abs(gabor_transform(u, x, 0.0)) - np.abs(gabor_transform(v, x, 0.0)))
    other = np.abs(np.abs(gabor_transform(u, x, 0.5)) - np.abs(gabor_transform(v, x, 0.5)))
    assert same.max() <= 1e-12
    assert other.max() > 1e-4


def test_pair_not_equivalent(pair):
    assert phase_align(*pair).distance > 0.1


def test_rejections():
    h1 = random_signal(2, 1.0, 1, real_only=True)
    with pytest.raises(ValueError):
        counterexample_pair(h1, BandlimitedSignal(1.0, np.zeros(5)))
    with pytest.raises(ValueError):
        counterexample_pair(h1, h1.scaled(-2.5))
    with pytest.raises(ValueError):
        counterexample_pair(h1, random_signal(2, 1.0, 3))


def test_mixed_lengths_padded():
    u, v = counterexample_pair(random_signal(1, 1.0, 1, real_only=True),
                               random_signal(3, 1.0, 2, real_only=True))
    assert u.K == v.K == 3
