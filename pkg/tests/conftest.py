import numpy as np
import pytest
from hypothesis import settings

from gaborpr.signal_model import BandlimitedSignal, random_signal

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@pytest.fixture
def seed7():
    return random_signal(3, 1.0, 7)


@pytest.fixture
def c0():
    """``c_0 = 1`` only, ``B = 1``."""
    return BandlimitedSignal(1.0, np.array([1.0 + 0j]))


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
