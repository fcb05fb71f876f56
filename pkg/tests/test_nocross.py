from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dehnfloer import _core, _kernels_py
from dehnfloer.errors import ShapeError
from dehnfloer.nocross import (
    COPRODUCT,
    CYLINDER,
    FIRST,
    MODES,
    PRODUCT,
    SECOND,
    SUM,
    CrossingScenario,
    H1ClassXD,
    _compile,
    build_branches,
    cylinder_local_energy_lhs,
    enumerate_crossing_configs,
    local_energy_lhs,
    orbit_class,
    same_slice_check,
    search_branch,
    verify_grid,
)


def test_local_energy_examples():
    half = Fraction(1, 2)
    assert local_energy_lhs(H1ClassXD(0, 1, 0), half, 2, 3) == 1
    assert local_energy_lhs(H1ClassXD(-1, 1, 0), half, 2, 3) == 0
    for x in (Fraction(0), Fraction(1, 7), Fraction(1)):
        assert local_energy_lhs(H1ClassXD(0, 0, 0), x, 4, 1) == 0
    assert cylinder_local_energy_lhs(-1, 1, Fraction(1, 2), 2) == 0
    assert cylinder_local_energy_lhs(1, -1, Fraction(1, 3), 3) == 0


def test_orbit_class_examples():
    assert orbit_class(SUM, 2, 2, 3) == (-2, 1, 1)
    assert orbit_class(FIRST, 0, 2, 3) == (0, 1, 0)
    assert orbit_class(SECOND, 3, 2, 3) == (-3, 0, 1)
    assert orbit_class(FIRST, 2, 2, 3) == (-2, 1, 0)
    assert orbit_class(SUM, 5, 2, 3) == (-5, 1, 1)
    with pytest.raises(ShapeError):
        orbit_class(FIRST, 3, 2, 3)
    with pytest.raises(ShapeError):
        orbit_class(SECOND, -1, 2, 3)


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_orbit_classes_sit_at_zero_energy(m, n, data):
    # every orbit class has zero local energy exactly at its own slice
    end = data.draw(st.sampled_from([FIRST, SECOND, SUM]))
    coef = {FIRST: m, SECOND: n, SUM: m + n}[end]
    i = data.draw(st.integers(0, coef))
    assert local_energy_lhs(orbit_class(end, i, m, n), Fraction(i, coef), m, n) == 0


def test_scenario_validation():
    with pytest.raises(ShapeError):
        CrossingScenario("triangle", 1, 1, 3)
    with pytest.raises(ShapeError):
        CrossingScenario(PRODUCT, 0, 1, 3)
    with pytest.raises(ShapeError):
        CrossingScenario(PRODUCT, 1, 1, 0)


def test_product_small_is_empty():
    r = enumerate_crossing_configs(CrossingScenario(PRODUCT, 1, 1, 5))
    assert r.empty and r.searched > 0


def test_coproduct_2_3_is_empty():
    r = enumerate_crossing_configs(CrossingScenario(COPRODUCT, 2, 3, 8))
    assert r.empty


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("m,n", [(1, 2), (3, 1), (2, 2)])
def test_strict_runs_empty(mode, m, n):
    assert enumerate_crossing_configs(CrossingScenario(mode, m, n, 4)).empty


def test_relaxed_control_has_horizontal_class():
    r = enumerate_crossing_configs(CrossingScenario(PRODUCT, 1, 1, 3, strict=False))
    assert not r.empty
    zero = {"p": 0, "q1": 0, "q2": 0}
    assert any(
        all({k: v[k] for k in zero} == zero for v in f.assignment.values() if "q1" in v)
        for f in r.feasible
    )


def test_certificate_accounts_for_every_assignment():
    r = enumerate_crossing_configs(CrossingScenario(PRODUCT, 2, 1, 3))
    assert sum(e.count for e in r.certificate) == r.searched
    names = {c.name for br in build_branches(r.scenario) for c in br.constraints}
    assert all(e.failing_constraint in names for e in r.certificate)
    j = r.certificate[0].to_json()
    assert set(j) == {"branch", "config", "failing_constraint", "count"}


def _keys(result):
    return {(f.branch, repr(sorted(f.assignment.items()))) for f in result.feasible}


@pytest.mark.parametrize("mode", [PRODUCT, COPRODUCT])
def test_monotone_in_bound(mode):
    for q in (1, 2):
        small = enumerate_crossing_configs(CrossingScenario(mode, 1, 2, q, strict=False))
        large = enumerate_crossing_configs(CrossingScenario(mode, 1, 2, q + 1, strict=False))
        assert _keys(small) <= _keys(large)
        assert large.searched > small.searched


@pytest.mark.parametrize("mode", MODES)
def test_backends_agree(mode):
    sc = CrossingScenario(mode, 2, 1, 2, strict=False)
    for br in build_branches(sc):
        _, arrays = _compile(br)
        k1, w1, s1 = _kernels_py.enumerate_linear(*arrays)
        k2, w2, s2 = _core.enumerate_linear(*arrays)
        assert np.array_equal(np.asarray(k1), np.asarray(k2))
        assert np.array_equal(np.asarray(w1), np.asarray(w2))
        assert sorted(map(tuple, s1)) == sorted(tuple(int(x) for x in s) for s in s2)


def test_search_branch_on_relaxed_cylinder():
    sc = CrossingScenario(CYLINDER, 2, 3, 3, strict=False)
    found = [f for br in build_branches(sc) for f in search_branch(br)[0]]
    assert found and all(f.branch.startswith(CYLINDER) for f in found)


def test_verify_grid_parallel_matches_serial():
    serial = verify_grid([PRODUCT, COPRODUCT], [1, 2], [1], 3)
    parallel = verify_grid([PRODUCT, COPRODUCT], [1, 2], [1], 3, workers=2)
    assert [r.searched for r in serial] == [r.searched for r in parallel]
    assert all(r.empty for r in serial + parallel)


def test_same_slice_examples():
    v = same_slice_check(2, 2, 1, 1, 2)
    assert v.allowed
    v = same_slice_check(2, 3, 1, 1, 2)
    assert not v.allowed
    assert v.interval == (Fraction(2, 5), Fraction(1, 2))
    assert v.interval[0] < v.x0 < v.interval[1]
    assert v.witness_class == (-1, 1, 0)
    assert v.energy <= 0
    v = same_slice_check(2, 3, 1, 1, 3)
    assert not v.allowed and v.interval is None and "homology" in v.reason
    with pytest.raises(ShapeError):
        same_slice_check(2, 3, 3, 0, 3)


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_same_slice_allows_exactly_equal_x(m, n, data):
    i = data.draw(st.integers(0, m))
    j = data.draw(st.integers(0, n))
    k = data.draw(st.integers(0, m + n))
    v = same_slice_check(m, n, i, j, k)
    assert v.allowed == (k == i + j and i * n == j * m)
    if not v.allowed and v.interval is not None:
        lo, hi = v.interval
        assert lo < v.x0 < hi
        # the witness class is negative on the whole open interval
        for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            assert local_energy_lhs(v.witness_class, lo + t * (hi - lo), m, n) < 0
