import numpy as np
import pytest

from azimodes.coupling import build_coupling
from azimodes.decomp import decompose


@pytest.fixture(scope="session")
def decomposition():
    """Cached decompositions keyed by (chi, tau)."""
    cache = {}

    def get(chi, tau):
        key = (chi, float(tau))
        if key not in cache:
            cache[key] = decompose(build_coupling(chi, tau))
        return cache[key]

    return get


def top_abs(values, J):
    return np.sort(np.abs(values))[::-1][:J]
