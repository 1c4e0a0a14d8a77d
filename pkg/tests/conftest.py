import numpy as np
import pytest

from sparsedil import scheme
from sparsedil.params import LEVELS, N, param_set


def random_challenge(rng: np.random.Generator, tau: int) -> np.ndarray:
    """A uniformly random weight-tau polynomial over {-1, 0, +1}."""
    c = np.zeros(N, dtype=np.int8)
    pos = rng.choice(N, tau, replace=False)
    c[pos] = rng.choice(np.array([-1, 1], dtype=np.int8), tau)
    return c


def random_secret(rng: np.random.Generator, eta: int, shape=(N,)) -> np.ndarray:
    return rng.integers(-eta, eta + 1, shape).astype(np.int8)


@pytest.fixture(params=LEVELS, ids=lambda lv: f"level{lv}")
def params(request):
    return param_set(request.param)


@pytest.fixture(scope="session")
def keypairs():
    """One deterministic keypair per level, shared across the session."""
    out = {}
    for lv in LEVELS:
        p = param_set(lv)
        out[lv] = scheme.keygen(p, bytes([lv]) * 32)
    return out
