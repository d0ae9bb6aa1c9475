import pytest

from hyperblock import build_cellulation, build_scheme, build_surface, make_field

_cells = {}
_schemes = {}
_surfaces = {}


@pytest.fixture(scope="session")
def cell():
    def get(q):
        if q not in _cells:
            _cells[q] = build_cellulation(make_field(q))
        return _cells[q]

    return get


@pytest.fixture(scope="session")
def scheme(cell):
    def get(q):
        if q not in _schemes:
            c = cell(q)
            _schemes[q] = build_scheme(c.table, c.cusps, c.transversal)
        return _schemes[q]

    return get


@pytest.fixture(scope="session")
def surface():
    def get(q):
        if q not in _surfaces:
            _surfaces[q] = build_surface(q)
        return _surfaces[q]

    return get
