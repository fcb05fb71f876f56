import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dehnfloer.floer import ELLIPTIC, HYPERBOLIC, TwistGenerator, floer_space, hf_space, iota, proj
from dehnfloer.gf2 import compose, tensor
from dehnfloer.structmaps import (
    check_associativity,
    check_coassociativity,
    check_cocommutativity,
    coproduct_map,
    product_map,
)
from dehnfloer.surface import SurfaceClass, SurfaceSpec, TwistCurveSpec, boundary_class, intersection_map

NONSEP = (SurfaceSpec(2, 0), TwistCurveSpec.nonseparating())
SEP = (SurfaceSpec(4, 0), TwistCurveSpec.separating(2, 0, 2, 0))
WITH_BOUNDARY = (SurfaceSpec(1, 1), TwistCurveSpec.nonseparating())
TOPOLOGIES = [NONSEP, SEP, WITH_BOUNDARY]

E, H = ELLIPTIC, HYPERBOLIC
pt = SurfaceClass(0, "pt")


def e(k, m):
    return TwistGenerator(E, k, m)


def h(k, m):
    return TwistGenerator(H, k, m)


def test_coproduct_e5_2_worked_out():
    # slices i = 0..2 with k - i <= 3: (0,2) (1,1) (2,0); boundary e's become pt
    delta = coproduct_map(*NONSEP, 2, 3)
    assert set(delta.image(e(2, 5))) == {(pt, e(2, 3)), (e(1, 2), e(1, 3)), (pt, pt)}


def test_coproduct_h_row_worked_out():
    d1 = SurfaceClass(0, "d", 1)
    # m = n = 1, k = 1: all four factors sit on boundary slices; e -> pt and
    # h -> d1 on both sides, so e0.h1 + h0.e1 + e1.h0 + h1.e0 cancels in pairs
    assert coproduct_map(*NONSEP, 1, 1).image(h(1, 2)) == ()
    # m = n = 2, k = 2: the i = 0 and i = 2 boundary terms cancel, leaving the middle
    assert set(coproduct_map(*NONSEP, 2, 2).image(h(2, 4))) == {(e(1, 2), h(1, 2)), (h(1, 2), e(1, 2))}
    # m = 2, n = 3, k = 2: i = 0 gives pt.h2 + d1.e2, i = 1 the middle, i = 2 gives pt.d1 + d1.pt
    assert set(coproduct_map(*NONSEP, 2, 3).image(h(2, 5))) == {
        (pt, h(2, 3)), (d1, e(2, 3)), (e(1, 2), h(1, 3)), (h(1, 2), e(1, 3)), (pt, d1), (d1, pt),
    }


def test_pt_pt_terms_cancel_for_equal_powers():
    delta = coproduct_map(*NONSEP, 2, 2)
    # (0,2) and (2,0) both give pt (x) pt
    assert (pt, pt) not in delta.image(e(2, 4))


def test_product_kills_twist_generators_and_pairs_a_b():
    mu = product_map(*NONSEP, 2, 3)
    for x, y in mu.source.labels:
        if isinstance(x, TwistGenerator) or isinstance(y, TwistGenerator):
            assert mu.image((x, y)) == ()
    a, b = SurfaceClass(0, "a", 1), SurfaceClass(0, "b", 1)
    assert mu.image((a, b)) == (pt,)
    assert mu.degree_shift == -2


@pytest.mark.parametrize("topo", [NONSEP, SEP])
def test_product_equals_composition(topo):
    for m, n in [(1, 1), (2, 3), (1, 4)]:
        a = hf_space(*topo, m)
        cs = a.surface
        b, ab = floer_space(cs, n), floer_space(cs, m + n)
        ref = compose(iota(ab), compose(intersection_map(cs), tensor(proj(a), proj(b))))
        assert ref.matrix == product_map(*topo, m, n).matrix


def expected_row(kind, k, m, n, cs):
    def res(kd, i, p):
        if 1 <= i <= p - 1:
            return {TwistGenerator(kd, i, p)}
        comp, idx = cs.locate("L" if i == 0 else "R")
        return {SurfaceClass(comp, "pt")} if kd == E else set(boundary_class(cs, comp, idx))

    out = set()
    for i in range(max(0, k - n), min(m, k) + 1):
        pairs = [(E, E)] if kind == E else [(E, H), (H, E)]
        for ka, kb in pairs:
            for u, v in itertools.product(res(ka, i, m), res(kb, k - i, n)):
                out ^= {(u, v)}
    return out


@pytest.mark.parametrize("topo", TOPOLOGIES)
def test_twist_rows_term_for_term(topo):
    for m in range(1, 6):
        for n in range(1, 7 - m):
            delta = coproduct_map(*topo, m, n)
            cs = hf_space(*topo, m).surface
            for k in range(1, m + n):
                for kind in (E, H):
                    assert set(delta.image(TwistGenerator(kind, k, m + n))) == expected_row(kind, k, m, n, cs)


@pytest.mark.parametrize("topo", TOPOLOGIES)
def test_identities_small_powers(topo):
    for m, n, p in itertools.product(range(1, 4), repeat=3):
        if m + n + p > 6:
            continue
        assert check_associativity(*topo, m, n, p).passed
        assert check_coassociativity(*topo, m, n, p).passed
        assert check_cocommutativity(*topo, m, n).passed


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_coassociativity_property(m, n, p):
    assert check_coassociativity(*WITH_BOUNDARY, m, n, p).passed


def test_alternative_identification_also_coassociative():
    # e at the boundary -> 0 and h -> 0 is another consistent choice
    zero = lambda kind, s, pw, cs: frozenset()
    for m, n, p in [(1, 1, 1), (2, 1, 2), (1, 3, 2)]:
        assert check_coassociativity(*NONSEP, m, n, p, zero).passed


def test_bad_identification_is_caught():
    # sending e at the boundary to both point classes breaks coassociativity
    def both_points(kind, s, pw, cs):
        if kind == E:
            return frozenset({SurfaceClass(0, "pt"), SurfaceClass(1, "pt")})
        return frozenset()

    failures = [
        (m, n, p)
        for m, n, p in itertools.product(range(1, 3), repeat=3)
        if not check_coassociativity(*SEP, m, n, p, both_points).passed
    ]
    assert failures
    report = check_coassociativity(*SEP, *failures[0], both_points)
    assert report.identity_checks[0].counterexample is not None
    assert report.to_json()["checks"][0]["pass"] is False


def test_report_json():
    r = check_cocommutativity(*NONSEP, 1, 2).to_json()
    assert r["checks"] == [{"name": "cocommutativity", "pass": True, "counterexample": None}]
    assert np.array(r["map"]["matrix"]).shape[1] == hf_space(*NONSEP, 3).dim
