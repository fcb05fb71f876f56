import pytest
from hypothesis import given, strategies as st

from dehnfloer.errors import NotBoundaryLabelError, ShapeError, UnsupportedTopologyError
from dehnfloer.floer import (
    ELLIPTIC,
    HYPERBOLIC,
    TwistGenerator,
    floer_space,
    hf_space,
    iota,
    proj,
    resolve_boundary_generator,
    twist_term,
)
from dehnfloer.gf2 import compose, identity_map
from dehnfloer.surface import SurfaceClass, SurfaceSpec, TwistCurveSpec, complement

NONSEP = (SurfaceSpec(2, 0), TwistCurveSpec.nonseparating())
SEP = (SurfaceSpec(4, 0), TwistCurveSpec.separating(2, 0, 2, 0))


@pytest.mark.parametrize("m", range(1, 7))
def test_dimension_closed_genus_two(m):
    assert hf_space(*NONSEP, m).dim == 4 + 2 * (m - 1)


def test_power_one_has_no_twist_part():
    assert hf_space(*NONSEP, 1).twist_part == ()


def test_degrees_of_twist_generators():
    fs = hf_space(*NONSEP, 3)
    assert fs.space.degree_of(TwistGenerator(ELLIPTIC, 1, 3)) == 0
    assert fs.space.degree_of(TwistGenerator(HYPERBOLIC, 2, 3)) == 1
    assert str(TwistGenerator(ELLIPTIC, 3, 5)) == "e^5_3"


def test_twist_generator_must_be_interior():
    with pytest.raises(ShapeError):
        TwistGenerator(ELLIPTIC, 0, 3)
    with pytest.raises(ShapeError):
        TwistGenerator("parabolic", 1, 3)


def test_unsupported_topology():
    with pytest.raises(UnsupportedTopologyError) as info:
        hf_space(SurfaceSpec(1, 0), TwistCurveSpec.nonseparating(), 2)
    assert info.value.bullet == 1
    with pytest.raises(UnsupportedTopologyError) as info:
        hf_space(SurfaceSpec(2, 0), TwistCurveSpec.separating(1, 0, 1, 0), 2)
    assert info.value.bullet == 2


@given(st.integers(1, 8))
def test_dimension_formula_separating(m):
    assert hf_space(*SEP, m).dim == 2 * (1 + 4) + 2 * (m - 1)


def test_boundary_resolution_nonseparating():
    cs = complement(*NONSEP)
    assert resolve_boundary_generator(ELLIPTIC, 0, 3, cs) == {SurfaceClass(0, "pt")}
    # L is d1, R is the last circle = d1
    assert resolve_boundary_generator(HYPERBOLIC, 0, 3, cs) == {SurfaceClass(0, "d", 1)}
    assert resolve_boundary_generator(HYPERBOLIC, 3, 3, cs) == {SurfaceClass(0, "d", 1)}
    with pytest.raises(NotBoundaryLabelError):
        resolve_boundary_generator(ELLIPTIC, 1, 3, cs)


def test_boundary_resolution_separating():
    cs = complement(*SEP)
    assert resolve_boundary_generator(ELLIPTIC, 2, 2, cs) == {SurfaceClass(1, "pt")}
    # each side has one boundary circle, which is null-homologous
    assert resolve_boundary_generator(HYPERBOLIC, 0, 2, cs) == frozenset()


def test_twist_term_interior_passthrough():
    cs = complement(*NONSEP)
    assert twist_term(HYPERBOLIC, 1, 2, cs) == {TwistGenerator(HYPERBOLIC, 1, 2)}


def test_proj_after_iota_is_identity():
    fs = hf_space(*NONSEP, 4)
    assert compose(proj(fs), iota(fs)) == identity_map(fs.morse_part)


def test_json_shape():
    d = floer_space(complement(*NONSEP), 2).to_json()
    assert d["dim"] == 6 and d["basis"][-1]["label"]["origin"] == "twist"
