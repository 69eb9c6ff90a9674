import pytest

from flockgq.blt import blt_qclan
from flockgq.knarr import knarr_build
from flockgq.search import solve_all, tactical, trivial_orbits


@pytest.fixture(scope="session")
def gq3():
    return knarr_build(blt_qclan("linear", 3))


@pytest.fixture(scope="session")
def gq5lin():
    return knarr_build(blt_qclan("linear", 5))


@pytest.fixture(scope="session")
def gq7km():
    return knarr_build(blt_qclan("kantor_monomial", 7))


@pytest.fixture(scope="session")
def census3(gq3):
    """All hemisystems of the linear q=3 quadrangle (trivial group)."""
    po, lo = trivial_orbits(gq3)
    system = tactical(gq3, po, lo)
    result = solve_all(system)
    assert result.status == "complete"
    return system, result
