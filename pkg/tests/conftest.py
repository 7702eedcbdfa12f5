"""Shared test configuration.

mpmath precision is process-global; a failed assertion inside a workdps
block would leak the elevated precision into later tests, so reset it
before every test.
"""

import mpmath as mp
import pytest


@pytest.fixture(autouse=True)
def _reset_mpmath_precision():
    mp.mp.dps = 15
    yield
    mp.mp.dps = 15
