from __future__ import annotations

import numpy as np
import pytest

import helpers


@pytest.fixture
def lab_fgk():
    return helpers.lab2x2()


@pytest.fixture
def reducible_fgk():
    return helpers.example3x3()


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
