import numpy as np
import pytest

import molsig as m
from molsig._backend import HAVE_NUMBA

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def unit_region():
    return m.DiskRegion(1.0)


@pytest.fixture
def free_params():
    # D from 1e-5 cm^2/s, observation at t = 300 s
    return m.ChannelParams(m.ChannelModel.FREE_DIFFUSION, 1.0, 1e-9, 300.0)


@pytest.fixture
def narrow_dist(free_params):
    # r^2/(D*t) = 4.8: support spans only ~2 decades, safe for direct
    # y-domain quadrature oracles
    return m.SignalDistribution.from_channel(free_params, m.DiskRegion(1.2e-3))


@pytest.fixture
def fig2_dist(free_params):
    return m.SignalDistribution.from_channel(free_params, m.DiskRegion(3e-3))


@pytest.fixture
def drift_params():
    # meter-scale disk needs the larger D to keep supports representable
    return m.ChannelParams(m.ChannelModel.DRIFT_DIFFUSION, 1.0, 1e-4, 300.0,
                           2.0 / 300.0)


@pytest.fixture
def drift_dist(drift_params):
    return m.SignalDistribution.from_channel(drift_params, m.DiskRegion(2.0))


def closed_form_distance_cdf(x, region):
    """Antiderivative of the disk line-picking density (test oracle).

    Integrating f(2r sin(phi)) * 2r cos(phi) d(phi) termwise gives an
    elementary antiderivative; independent of the package's quadrature.
    """
    phi = np.arcsin(np.clip(np.asarray(x, dtype=float) / region.diameter, 0.0, 1.0))
    s2 = np.sin(phi) ** 2
    return (8.0 / np.pi) * (
        0.5 * np.pi * s2
        + 0.5 * phi * np.cos(2 * phi)
        - 0.25 * np.sin(2 * phi)
        - 0.25 * phi
        + np.sin(4 * phi) / 16.0
    )
