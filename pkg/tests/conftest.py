import numpy as np
import pytest

from comsim import SystemParams


def baseline(**overrides):
    """Standard operating point; override freely per test."""
    kwargs = dict(
        omega_b=30.0,
        kappa_a=1e-4,
        kappa_c=15.0,
        gamma=0.01,
        delta_a=-30.0,
        delta_c=-30.0,
        n_bar=0.01,
    )
    kwargs.update(overrides)
    return SystemParams.from_thz(**kwargs)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_stable_system(rng, n):
    """Random strictly stable drift with a random PSD diffusion."""
    a = rng.normal(size=(n, n))
    shift = float(np.max(np.linalg.eigvals(a).real))
    a -= (shift + rng.uniform(0.5, 1.5)) * np.eye(n)
    m = rng.normal(size=(n, n))
    d = m @ m.T
    return a, d
