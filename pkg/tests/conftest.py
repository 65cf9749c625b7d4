import pytest

from spdcvis.crystal import CrystalSpec, dispersion_params
from spdcvis.optics import ApertureSpec, Circular, OpticalSystemSpec


@pytest.fixture(scope="session")
def uv():
    return dispersion_params(CrystalSpec(1.5, 351.1))


@pytest.fixture(scope="session")
def violet():
    return dispersion_params(CrystalSpec(1.5, 415.0))


def circ_system(b, d1=1000.0):
    return OpticalSystemSpec(d1, ApertureSpec(Circular(b)))
