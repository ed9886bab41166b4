import numpy as np
import pytest

from polar_olct import OffsetParams, synthesize, random_spectrum


@pytest.fixture(scope="session")
def rot():
    # the rotation matrix reduces every transform to its classical form
    return OffsetParams(0.0, 1.0, -1.0, 0.0)


@pytest.fixture(scope="session")
def lct():
    # unimodular chirp matrix with a != d so chirp-sign variants differ
    return OffsetParams(1.0, 2.0, -0.25, 0.5)


@pytest.fixture(scope="session")
def offset_params():
    return OffsetParams(1.0, 1.0, 0.0, 1.0, (0.3, 0.4), (0.1, -0.2))


@pytest.fixture(scope="session")
def make_field():
    def factory(params, omega=1.0, k_max=1, j_spec=3, seed=3,
                order_map="per_order", fixed_order=0, hermitian=False):
        spec = random_spectrum(omega, k_max, j_spec, seed=seed, order_map=order_map,
                               fixed_order=fixed_order, hermitian=hermitian)
        return synthesize(spec, params)
    return factory


@pytest.fixture
def probe_mesh():
    def factory(r_lo, r_hi, n):
        r = np.linspace(r_lo, r_hi, n)
        t = np.linspace(-np.pi, np.pi, n, endpoint=False)
        return np.meshgrid(r, t, indexing="ij")
    return factory
