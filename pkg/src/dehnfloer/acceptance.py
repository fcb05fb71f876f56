"""The nine end-to-end checks, each timed against its budget.

Every check returns an :class:`AcceptanceResult`; ``run_all`` is what
``dehnfloer check-all`` and ``tests/test_acceptance.py`` call.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cwmodel import surface_oracle
from .floer import ELLIPTIC, HYPERBOLIC, TwistGenerator, floer_space, hf_space, iota, proj
from .gf2 import compose, restrict_source, tensor
from .indexcalc import (
    OrbitKind,
    SectionIndexData,
    Topology,
    check_monotonicity,
    force_zero_wrapping,
    fredholm_index,
)
from .moduli import (
    NEGATIVE,
    POSITIVE,
    OdeProblem,
    _derivative,
    c_star,
    coproduct_from_cascades,
    evaluate,
    shoot_c_infinity,
    solve_end_ode,
)
from .nocross import CrossingScenario, enumerate_crossing_configs, verify_grid
from .structmaps import (
    check_associativity,
    check_coassociativity,
    check_cocommutativity,
    coproduct_map,
    product_map,
)
from .surface import (
    LEFT,
    RIGHT,
    Component,
    SurfaceClass,
    SurfaceSpec,
    TwistCurveSpec,
    boundary_class,
    component_classes,
    intersection_map,
    pairing,
)

CLOSED_NONSEP = (SurfaceSpec(2, 0), TwistCurveSpec.nonseparating())
SPLIT_2_2 = (SurfaceSpec(4, 0), TwistCurveSpec.separating(2, 0, 2, 0))


@dataclass(frozen=True)
class AcceptanceResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    budget: float

    @property
    def ok(self) -> bool:
        return self.passed and self.elapsed < self.budget

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        timing = f"{self.elapsed:.2f}s/{self.budget:g}s"
        return f"[{verdict}] {self.number}. {self.name} ({timing}): {self.detail}"

    def to_json(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "pass": self.ok,
            "detail": self.detail,
            "elapsed": round(self.elapsed, 3),
            "budget": self.budget,
        }


def _timed(number: int, name: str, budget: float, body: Callable[[], tuple[bool, str]]) -> AcceptanceResult:
    t0 = time.perf_counter()
    passed, detail = body()
    return AcceptanceResult(number, name, passed, detail, time.perf_counter() - t0, budget)


def criterion_1() -> AcceptanceResult:
    def body():
        dims = [hf_space(*CLOSED_NONSEP, m).dim for m in range(1, 7)]
        want = [4 + 2 * (m - 1) for m in range(1, 7)]
        return dims == want, f"dims {dims}, expected {want}"

    return _timed(1, "HF decomposition dimensions", 1.0, body)


def criterion_2() -> AcceptanceResult:
    def body():
        failures = []
        for s, c in (CLOSED_NONSEP, SPLIT_2_2):
            for m in range(1, 6):
                for n in range(1, 7 - m):
                    mu = product_map(s, c, m, n)
                    a = hf_space(s, c, m)
                    cs = a.surface
                    b, ab = floer_space(cs, n), floer_space(cs, m + n)
                    twist_in = [j for j, (x, y) in enumerate(mu.source.labels)
                                if isinstance(x, TwistGenerator) or isinstance(y, TwistGenerator)]
                    if mu.matrix.bits[:, twist_in].any():
                        failures.append(f"twist input nonzero at {(m, n)}")
                    ref = compose(iota(ab), compose(intersection_map(cs), tensor(proj(a), proj(b))))
                    if not np.array_equal(ref.matrix.bits, mu.matrix.bits):
                        failures.append(f"composition mismatch at {(m, n)}")
                    for k, comp in enumerate(cs.components):
                        for i in range(1, comp.genus + 1):
                            ai, bi = SurfaceClass(k, "a", i), SurfaceClass(k, "b", i)
                            if set(mu.image((ai, bi))) != {SurfaceClass(k, "pt")}:
                                failures.append(f"a{i}.b{i} != pt on component {k} at {(m, n)}")
        return not failures, "; ".join(failures[:3]) or "twist inputs vanish, a_i.b_i = pt, matches composition"

    return _timed(2, "product formula", 1.0, body)


def _resolved(kind: str, i: int, power: int, cs) -> set:
    """Boundary terms written out directly: e -> pt, h -> boundary circle class."""
    if 1 <= i <= power - 1:
        return {TwistGenerator(kind, i, power)}
    comp, idx = cs.locate(LEFT if i == 0 else RIGHT)
    if kind == ELLIPTIC:
        return {SurfaceClass(comp, "pt")}
    return set(boundary_class(cs, comp, idx))


def _xor_pairs(acc: set, left: set, right: set) -> None:
    for u in left:
        for v in right:
            acc ^= {(u, v)}


def criterion_3() -> AcceptanceResult:
    def body():
        checked, failures = 0, []
        for s, c in (CLOSED_NONSEP, SPLIT_2_2):
            for m in range(1, 8):
                for n in range(1, 9 - m):
                    delta = coproduct_map(s, c, m, n)
                    cs = hf_space(s, c, m + n).surface
                    for k in range(1, m + n):
                        for kind in (ELLIPTIC, HYPERBOLIC):
                            want: set = set()
                            for i in range(max(0, k - n), min(m, k) + 1):
                                j = k - i
                                if kind == ELLIPTIC:
                                    _xor_pairs(want, _resolved(ELLIPTIC, i, m, cs), _resolved(ELLIPTIC, j, n, cs))
                                else:
                                    _xor_pairs(want, _resolved(ELLIPTIC, i, m, cs), _resolved(HYPERBOLIC, j, n, cs))
                                    _xor_pairs(want, _resolved(HYPERBOLIC, i, m, cs), _resolved(ELLIPTIC, j, n, cs))
                            got = set(delta.image(TwistGenerator(kind, k, m + n)))
                            checked += 1
                            if got != want:
                                failures.append(f"{TwistGenerator(kind, k, m + n)} at {(m, n)}")
        return not failures, f"{checked} rows checked" + (f"; mismatches: {failures[:3]}" if failures else "")

    return _timed(3, "coproduct formula rows", 1.0, body)


def criterion_4() -> AcceptanceResult:
    def body():
        failures, runs = [], 0
        for s, c in (CLOSED_NONSEP, SPLIT_2_2):
            for m in range(1, 6):
                for n in range(1, 7 - m):
                    reports = [check_cocommutativity(s, c, m, n)]
                    for p in range(1, 8 - m - n):
                        reports += [check_associativity(s, c, m, n, p), check_coassociativity(s, c, m, n, p)]
                    for r in reports:
                        runs += 1
                        for chk in r.identity_checks:
                            if not chk.passed:
                                failures.append(f"{chk.name} {(m, n)}: {chk.counterexample}")
        detail = f"{runs} identity checks" + (f"; falsified: {failures[:2]}" if failures else ", all pass")
        return not failures, detail

    return _timed(4, "associativity, coassociativity, cocommutativity", 10.0, body)


def criterion_5(workers: int = 4) -> AcceptanceResult:
    def body():
        grid = verify_grid(("product", "coproduct"), range(1, 5), range(1, 5), 10, True, workers)
        nonempty = [(r.scenario.mode, r.scenario.m, r.scenario.n) for r in grid if not r.empty]
        control = enumerate_crossing_configs(CrossingScenario("product", 1, 1, 3, strict=False))
        searched = sum(r.searched for r in grid)
        ok = not nonempty and not control.empty
        detail = (f"{len(grid)} scenarios, {searched} assignments, feasible in {nonempty or 'none'}; "
                  f"relaxed control has {len(control.feasible)} survivors")
        return ok, detail

    return _timed(5, "no-crossing enumeration", 60.0, body)


MONOTONICITY_TABLE = (
    (SurfaceSpec(2, 0), TwistCurveSpec.nonseparating(), None),
    (SurfaceSpec(1, 0), TwistCurveSpec.nonseparating(), 1),
    (SurfaceSpec(1, 1), TwistCurveSpec.nonseparating(), None),
    (SurfaceSpec(3, 0), TwistCurveSpec.nonseparating(), None),
    (SurfaceSpec(4, 0), TwistCurveSpec.separating(2, 0, 2, 0), None),
    (SurfaceSpec(2, 0), TwistCurveSpec.separating(1, 0, 1, 0), 2),
    (SurfaceSpec(2, 1), TwistCurveSpec.separating(0, 1, 2, 0), None),
    (SurfaceSpec(1, 1), TwistCurveSpec.separating(0, 1, 1, 0), 2),
    (SurfaceSpec(0, 2), TwistCurveSpec.separating(0, 1, 0, 1), None),
    (SurfaceSpec(4, 1), TwistCurveSpec.separating(3, 0, 1, 1), None),
)


def criterion_6() -> AcceptanceResult:
    def body():
        twist = SectionIndexData((OrbitKind.HYPERBOLIC,), (OrbitKind.ELLIPTIC, OrbitKind.ELLIPTIC))
        ind = fredholm_index(twist)
        forced = {g: force_zero_wrapping(Topology.closed(g), 0) for g in (2, 3, 4)}
        forced_ok = all(v.forced_zero for v in forced.values())
        table = [check_monotonicity(s, c).failing_bullet == want for s, c, want in MONOTONICITY_TABLE]
        ok = ind == 1 and forced_ok and all(table)
        detail = (f"twist-region index {ind}; eta forced to 0 for g=2,3,4: {forced_ok}; "
                  f"monotonicity table {sum(table)}/{len(table)}")
        return ok, detail

    return _timed(6, "index calculus", 1.0, body)


def criterion_7() -> AcceptanceResult:
    def body():
        m, n, K = 2, 3, 3
        top = OdeProblem(m + n, K, POSITIVE, tolerance=1e-9)
        c = shoot_c_infinity(m, n, K)
        far = abs(evaluate(top, c, 30.0) - K / (m + n))
        traj = solve_end_ode(top, c)
        residual = traj.max_residual
        worst_limit, worst_slope = 0.0, abs(_derivative(top, c, 0.5) + K)
        for k1 in range(max(0, K - n), min(m, K) + 1):
            for coeff, k in ((m, k1), (n, K - k1)):
                p = OdeProblem(coeff, k, NEGATIVE, tolerance=1e-9)
                neg = solve_end_ode(p, c + 1.0)
                worst_limit = max(worst_limit, abs(evaluate(p, c + 1.0, 19.0) - k / coeff))
                worst_slope = max(worst_slope, abs(_derivative(p, c + 1.0, 0.5) + k))
                residual = max(residual, neg.max_residual)
        ok = far < 1e-8 and residual < 1e-9 and worst_limit < 1e-6 and worst_slope < 1e-6
        detail = (f"c_inf={c_star(top):.10f}, |x(N+30)-3/5|={far:.1e}, residual {residual:.1e}, "
                  f"negative-end limit error {worst_limit:.1e}, slope error {worst_slope:.1e}")
        return ok, detail

    return _timed(7, "end ODE reconstruction", 5.0, body)


def criterion_8() -> AcceptanceResult:
    def body():
        mismatches, blocks = [], 0
        for s, c in (CLOSED_NONSEP, SPLIT_2_2):
            for m in range(1, 8):
                for n in range(1, 9 - m):
                    cas = coproduct_from_cascades(m, n, s, c)
                    block = restrict_source(coproduct_map(s, c, m, n), cas.source.labels)
                    blocks += 1
                    if block.target != cas.target or block.matrix != cas.matrix:
                        mismatches.append((m, n))
        return not mismatches, f"{blocks} twist blocks compared, mismatches {mismatches or 'none'}"

    return _timed(8, "cascade coproduct equals formula", 1.0, body)


def criterion_9() -> AcceptanceResult:
    def body():
        bad = []
        for h in range(4):
            for c in range(1, 5):
                r = surface_oracle(h, c)
                comp = Component(h, c)
                classes = component_classes(0, comp)
                ones = [x for x in classes if x.degree == 1]
                dims = (sum(1 for x in classes if x.degree == 0), len(ones), 0)
                table = tuple(tuple(pairing(x, y) for y in ones) for x in ones)
                names = tuple(f"{x.kind}{x.index}".replace("d", "c") for x in ones)
                if (r.betti, r.intersection, r.cycles) != (dims, table, names) or not (
                    r.last_boundary_is_sum and r.cycles_form_basis
                ):
                    bad.append((h, c))
        return not bad, f"16 surfaces, disagreements {bad or 'none'}"

    return _timed(9, "CW oracle agreement", 5.0, body)


CRITERIA: tuple[Callable[[], AcceptanceResult], ...] = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9,
)


def run_all() -> list[AcceptanceResult]:
    return [f() for f in CRITERIA]
