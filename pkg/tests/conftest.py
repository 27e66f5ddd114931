import math

import numpy as np
import pytest

from bornsim import ModelConfig, normalize


@pytest.fixture
def state_two():
    """Two outcomes with probabilities 0.36 / 0.64 and a pure-imaginary entry."""
    return normalize([complex(0.6, 0.0), complex(0.0, 0.8)])


@pytest.fixture
def state_three():
    """Three outcomes with probabilities 0.36 / 0.2304 / 0.4096."""
    return normalize([complex(0.6, 0.0), complex(0.0, 0.48), complex(0.64, 0.0)])


@pytest.fixture
def state_equal_pair():
    return normalize([complex(1.0, 0.0), complex(1.0, 0.0)])


@pytest.fixture
def cfg_two(state_two):
    return ModelConfig(state=state_two)


@pytest.fixture
def cfg_three(state_three):
    return ModelConfig(state=state_three)


def random_state(rng: np.random.Generator, dim: int):
    """Haar-ish random normalized state with nowhere-tiny support avoided."""
    raw = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return normalize(raw)


def random_point_in_disk(rng: np.random.Generator, radius: float):
    r = radius * math.sqrt(rng.random())
    phi = 2.0 * math.pi * rng.random()
    return r * math.cos(phi), r * math.sin(phi)
