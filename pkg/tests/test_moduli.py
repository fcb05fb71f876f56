import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from dehnfloer.errors import NumericError, ShapeError
from dehnfloer.gf2 import restrict_source
from dehnfloer.moduli import (
    END_1,
    END_2,
    END_INF,
    NEGATIVE,
    POSITIVE,
    CascadeSpec,
    CutoffProfile,
    OdeProblem,
    c_star,
    count_cascades,
    coproduct_from_cascades,
    end_data,
    evaluate,
    moduli_descriptor,
    normalize_ends,
    shoot_by_bisection,
    shoot_c_infinity,
    solve_end_ode,
    verify_section_ansatz,
)
from dehnfloer.structmaps import coproduct_map
from dehnfloer.surface import SurfaceSpec, TwistCurveSpec


def _oracle_c_star(coeff, k, cut=CutoffProfile()):
    # primitive by quadrature of chi, then the outer integral, with no closed forms
    P = lambda d: integrate.quad(lambda t: float(cut.chi(t)), 0.0, d, limit=200)[0]
    f = lambda d: math.exp(-coeff * P(d))
    pieces = [0.0, cut.gap, cut.gap + cut.width, 12.0]
    return k * sum(integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-11, limit=200)[0] for a, b in zip(pieces, pieces[1:]))


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("coeff,k", [(5, 3), (3, 2)])
def test_c_star_matches_nested_quadrature(coeff, k):
    p = OdeProblem(coeff, k)
    assert c_star(p) == pytest.approx(_oracle_c_star(coeff, k), rel=1e-9)


def test_c_star_known_value_and_k_zero():
    assert c_star(OdeProblem(5, 3)) == pytest.approx(4.8322657296, abs=1e-9)
    assert c_star(OdeProblem(5, 0)) == 0.0
    with pytest.raises(ShapeError):
        c_star(OdeProblem(5, 3, NEGATIVE))


def test_primitive_matches_quadrature():
    cut = CutoffProfile(N=1.0, width=1.5, gap=0.5)
    for d in (0.2, 0.5, 0.9, 1.7, 2.0, 5.0):
        want = integrate.quad(lambda t: float(cut.chi(t)), 0.0, d, points=[0.5, 2.0])[0]
        assert cut.primitive(d) == pytest.approx(want, abs=1e-12)


def test_cutoff_validation_and_step():
    with pytest.raises(ShapeError):
        CutoffProfile(N=0)
    with pytest.raises(ShapeError):
        CutoffProfile(width=-1)
    step = CutoffProfile(width=0.0, gap=1.0)
    assert step.chi(0.5) == 0.0 and step.chi(1.5) == 1.0
    assert step.primitive(3.0) == pytest.approx(2.0)


def test_problem_validation():
    with pytest.raises(ShapeError):
        OdeProblem(3, 4)
    with pytest.raises(ShapeError):
        OdeProblem(3, 1, "sideways")
    with pytest.raises(ShapeError):
        OdeProblem(0, 0)


def test_constant_cutoff_gives_constant_trajectory():
    cut = CutoffProfile(width=0.0, gap=0.0)
    p = OdeProblem(5, 3, POSITIVE, cut)
    assert c_star(p) == pytest.approx(0.6, abs=1e-14)
    traj = solve_end_ode(p, c_star(p))
    assert np.allclose(traj.x, 0.6, atol=1e-12)


@pytest.mark.parametrize("coeff,k", [(5, 3), (2, 1), (4, 0)])
def test_positive_end_converges(coeff, k):
    p = OdeProblem(coeff, k)
    traj = solve_end_ode(p, c_star(p))
    assert traj.max_residual < 1e-9
    assert abs(traj.x[-1] - k / coeff) < 1e-10
    assert traj.to_rows()[0][0] == pytest.approx(float(traj.s[0]))


@pytest.mark.parametrize("coeff,k,c", [(2, 1, 1.0), (3, 2, 5.0), (3, 0, 2.0)])
def test_negative_end_converges_with_slope(coeff, k, c):
    p = OdeProblem(coeff, k, NEGATIVE)
    assert abs(evaluate(p, c, 19.0) - k / coeff) < 1e-8
    traj = solve_end_ode(p, c)
    # near the boundary chi = 0 and x' = -k in the distance variable
    near = [i for i, d in enumerate(p.d_of(traj.s)) if d < p.cutoff.gap - 0.01]
    assert np.allclose(traj.dxds[near], -k, atol=1e-8)


def test_shooting_and_bisection_agree():
    c = shoot_c_infinity(2, 3, 3)
    p = OdeProblem(5, 3)
    assert abs(evaluate(p, c, 30.0) - 0.6) < 1e-8
    assert shoot_by_bisection(p) == pytest.approx(c, abs=1e-8)
    with pytest.raises(ShapeError):
        shoot_c_infinity(2, 3, 6)


def test_wrong_constant_diverges():
    p = OdeProblem(5, 3)
    c = c_star(p)
    up = evaluate(p, c + 1e-3, 30.0) - 0.6
    down = evaluate(p, c - 1e-3, 30.0) - 0.6
    assert up > 1e50 and down < -1e50


def test_ode_residual_tolerance_enforced():
    p = OdeProblem(5, 3, tolerance=1e-30)
    with pytest.raises(NumericError):
        solve_end_ode(p, c_star(p))


def test_section_ansatz():
    p = OdeProblem(5, 3)
    r = verify_section_ansatz(p)
    assert r.max_residual < 1e-9
    shifted = verify_section_ansatz(p, y_shift=0.37)
    assert shifted.max_residual == pytest.approx(r.max_residual, abs=1e-9)
    wrong = verify_section_ansatz(p, y_sign=1)
    assert wrong.max_second == pytest.approx(2 * p.k, rel=1e-6)
    assert set(r.to_json()) >= {"max_first", "max_second"}


def test_descriptor_examples():
    assert moduli_descriptor(2, 3, 3, 1, 2).kind == "circle"
    assert moduli_descriptor(2, 3, 4, 2, 2).kind == "circle"
    empty = moduli_descriptor(2, 3, 3, 2, 2)
    assert empty.kind == "empty" and "homology" in empty.reason
    d = moduli_descriptor(2, 3, 3, 1, 2)
    assert d.c_neg > d.c_inf == pytest.approx(c_star(OdeProblem(5, 3)))


@given(st.integers(1, 4), st.integers(1, 4), st.data())
@settings(max_examples=25)
def test_descriptor_shift_invariance(m, n, data):
    k1 = data.draw(st.integers(0, m))
    k2 = data.draw(st.integers(0, n))
    t = data.draw(st.integers(-2, 2))
    base = moduli_descriptor(m, n, k1 + k2, k1, k2)
    moved = moduli_descriptor(m, n, k1 + k2 + t * (m + n), k1 + t * m, k2 + t * n)
    assert base.kind == moved.kind == "circle"
    assert base.normalized == moved.normalized


def test_normalize_ends():
    assert normalize_ends(2, 3, 8, 3, 5) == (3, 1, 2)
    assert normalize_ends(2, 3, 4, 3, 1) is None


def test_end_data_limits():
    e = end_data(5, 3, POSITIVE)
    assert e.limit_error < 1e-10 and e.slope_error < 1e-8
    e = end_data(3, 1, NEGATIVE)
    assert e.limit_error < 1e-8 and e.slope_error < 1e-8


def test_cascade_spec_validation_and_generators():
    with pytest.raises(ShapeError):
        CascadeSpec(2, 3, 3, 2, 2, END_INF)
    with pytest.raises(ShapeError):
        CascadeSpec(2, 3, 3, 1, 2, "middle")
    gens = CascadeSpec(2, 3, 3, 1, 2, END_1).generators()
    assert gens == (("hyperbolic", 3, 5), ("hyperbolic", 1, 2), ("elliptic", 2, 3))
    assert CascadeSpec(2, 3, 3, 1, 2, END_INF).generators()[0][0] == "elliptic"


@pytest.mark.parametrize("fixed", [END_INF, END_1, END_2])
def test_each_circle_gives_one_cascade(fixed):
    assert count_cascades(CascadeSpec(2, 3, 3, 1, 2, fixed)) == 1


@given(st.integers(1, 4), st.integers(1, 4), st.data())
@settings(max_examples=20)
def test_cascade_count_swap_symmetry(m, n, data):
    k1 = data.draw(st.integers(0, m))
    k2 = data.draw(st.integers(0, n))
    fixed = data.draw(st.sampled_from([END_INF, END_1, END_2]))
    swapped = {END_INF: END_INF, END_1: END_2, END_2: END_1}[fixed]
    a = count_cascades(CascadeSpec(m, n, k1 + k2, k1, k2, fixed))
    b = count_cascades(CascadeSpec(n, m, k1 + k2, k2, k1, swapped))
    assert a == b


@pytest.mark.parametrize(
    "s,c", [(SurfaceSpec(2, 0), TwistCurveSpec.nonseparating()), (SurfaceSpec(4, 0), TwistCurveSpec.separating(2, 0, 2, 0))]
)
@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 2), (1, 4)])
def test_cascade_coproduct_equals_formula(s, c, m, n):
    cas = coproduct_from_cascades(m, n, s, c)
    block = restrict_source(coproduct_map(s, c, m, n), cas.source.labels)
    assert block.target == cas.target
    assert block.matrix == cas.matrix
