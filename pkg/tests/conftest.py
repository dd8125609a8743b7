import math

import pytest

from src.data.measurements import FixtureCondition, FixtureSpec, generate_fixtures, reference_endpoint_fixture
from src.models.mechanics import ArcGeometry, BeamSection, BLSChain, Material
from src.models.oracles import QuadratureSpec


@pytest.fixture
def material() -> Material:
    return Material(E=2000.0, nu=0.35)


@pytest.fixture
def square_section() -> BeamSection:
    return BeamSection(h=10.0, b=10.0)


@pytest.fixture
def chain() -> BLSChain:
    return BLSChain(h=10.0, L=100.0, F_T=10.0, N=10)


@pytest.fixture
def quarter_arc() -> ArcGeometry:
    return ArcGeometry(C=100.0, alpha=math.pi / 2)


@pytest.fixture
def fast_quadrature() -> QuadratureSpec:
    return QuadratureSpec(n_intervals=2000)


@pytest.fixture
def linear_fixture_bytes() -> bytes:
    """F = 0.35 d + 0.5 over d = 0..10 mm, one condition."""
    spec = FixtureSpec(conditions=(FixtureCondition("lateral:0:w0", 0.35, intercept=0.5),))
    return generate_fixtures(spec)


@pytest.fixture
def reference_fixture_bytes() -> bytes:
    return generate_fixtures(reference_endpoint_fixture())


@pytest.fixture
def write_file(tmp_path):
    def _write(name: str, content) -> str:
        path = tmp_path / name
        path.write_bytes(content if isinstance(content, bytes) else content.encode("utf-8"))
        return str(path)

    return _write
