import numpy as np
import pytest

from sheartext.shearlets import build_shearlet_system


@pytest.fixture(scope="session")
def system256():
    """The default 256-grid shearlet bank, built once for the whole run."""
    return build_shearlet_system(256, 4)


@pytest.fixture(scope="session")
def system64():
    """A small bank for tests that only need structure, not resolution."""
    return build_shearlet_system(64, 4)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
