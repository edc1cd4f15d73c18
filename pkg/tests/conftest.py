"""
Shared fixtures for the cyclohedra test suite.
"""

import pytest

from cyclohedra.config import Settings
from cyclohedra.geodesic_service import GeodesicService
from cyclohedra.triangulation import CsTriangulation


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: deep or exhaustive runs (deselect with -m 'not slow')")


@pytest.fixture
def settings(tmp_path):
    return Settings(cache_dir=tmp_path / "cache")


@pytest.fixture
def geodesics(settings):
    return GeodesicService(settings)


@pytest.fixture
def hexagon():
    """d=2 triangulation {0,2}, {0,3}, {3,5} used throughout the examples."""
    return CsTriangulation.build(2, [(0, 2), (0, 3), (3, 5)])


@pytest.fixture
def write_triangulation(tmp_path):
    """Writes a triangulation in the text format and returns the file path."""
    from cyclohedra.utils.triangulation_format import serialize

    def _write(t, name):
        path = tmp_path / name
        path.write_text(serialize(t))
        return path

    return _write
