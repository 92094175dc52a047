"""Shared fixtures."""
import numpy as np
import pytest

from qfric.core import Grid1D


@pytest.fixture
def wide_grid():
    return Grid1D(-10.0, 10.0, 1024)


@pytest.fixture
def ring():
    return Grid1D(0.0, 2 * np.pi, 256, "periodic")
