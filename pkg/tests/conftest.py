import pytest

from fdtc.surface import SurfaceSpec, standard_triangulation

# reference curves on the standard one-holed torus triangulation
TORUS_A = (0, 1, 0, 1, 1)
TORUS_B = (1, 0, 0, 1, 0)


@pytest.fixture(scope="session")
def torus_tri():
    return standard_triangulation(SurfaceSpec(1, ("S",)))


@pytest.fixture(scope="session")
def two_holed_torus_tri():
    return standard_triangulation(SurfaceSpec(1, ("C1", "C2")))


@pytest.fixture(scope="session")
def annulus_tri():
    return standard_triangulation(SurfaceSpec(0, ("C1", "C2")))


@pytest.fixture(scope="session")
def disc2_tri():
    return standard_triangulation(SurfaceSpec(0, ("C",), 2))


@pytest.fixture(scope="session")
def disc3_tri():
    return standard_triangulation(SurfaceSpec(0, ("C",), 3))
