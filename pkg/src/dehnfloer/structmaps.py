"""Product and coproduct on HF(φ^m), built entrywise, and checks of their identities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

import numpy as np

from .floer import (
    ELLIPTIC,
    HYPERBOLIC,
    BoundaryIdentification,
    FloerSpace,
    TwistGenerator,
    floer_space,
    hf_space,
    resolve_boundary_generator,
    twist_term,
)
from .gf2 import F2LinearMap, compose, flatten_label, identity_map, swap_map, tensor
from .surface import (
    SurfaceClass,
    SurfaceSpec,
    TwistCurveSpec,
    diagonal_coproduct,
    intersection_product,
)


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    counterexample: tuple | None = None

    def to_json(self) -> dict:
        ce = None if self.counterexample is None else [str(x) for x in self.counterexample]
        return {"name": self.name, "pass": self.passed, "counterexample": ce}


@dataclass(frozen=True)
class StructureMapReport:
    map: F2LinearMap
    identity_checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.identity_checks)

    def to_json(self) -> dict:
        return {"map": self.map.to_json(), "checks": [c.to_json() for c in self.identity_checks]}


def _product(a: FloerSpace, b: FloerSpace, ab: FloerSpace) -> F2LinearMap:
    src = a.space.tensor(b.space)
    images = {}
    for x, y in src.labels:
        if isinstance(x, SurfaceClass) and isinstance(y, SurfaceClass):
            images[(x, y)] = intersection_product(x, y)
    return F2LinearMap.from_columns(src, ab.space, -2, images)


def _pairs(left: frozenset, right: frozenset) -> list[tuple[Hashable, Hashable]]:
    return [(u, v) for u in left for v in right]


def _coproduct(
    whole: FloerSpace, a: FloerSpace, b: FloerSpace, identification: BoundaryIdentification
) -> F2LinearMap:
    cs, m, n = whole.surface, a.power, b.power
    images: dict[Hashable, list] = {}
    for lab in whole.space.labels:
        if isinstance(lab, SurfaceClass):
            images[lab] = list(diagonal_coproduct(lab))
            continue
        k = lab.slice
        terms: list = []
        for i in range(max(0, k - n), min(m, k) + 1):
            e_left = twist_term(ELLIPTIC, i, m, cs, identification)
            e_right = twist_term(ELLIPTIC, k - i, n, cs, identification)
            if lab.kind == ELLIPTIC:
                terms += _pairs(e_left, e_right)
            else:
                h_left = twist_term(HYPERBOLIC, i, m, cs, identification)
                h_right = twist_term(HYPERBOLIC, k - i, n, cs, identification)
                terms += _pairs(e_left, h_right) + _pairs(h_left, e_right)
        images[lab] = terms
    return F2LinearMap.from_columns(whole.space, a.space.tensor(b.space), 0, images)


def product_map(s: SurfaceSpec, c: TwistCurveSpec, m: int, n: int) -> F2LinearMap:
    """HF(φ^m) ⊗ HF(φ^n) -> HF(φ^{m+n}): intersect the Σ₀ parts, kill twist generators."""
    a = hf_space(s, c, m)
    return _product(a, floer_space(a.surface, n), floer_space(a.surface, m + n))


def coproduct_map(
    s: SurfaceSpec,
    c: TwistCurveSpec,
    m: int,
    n: int,
    identification: BoundaryIdentification = resolve_boundary_generator,
) -> F2LinearMap:
    """HF(φ^{m+n}) -> HF(φ^m) ⊗ HF(φ^n).

    Σ₀ classes go through the diagonal. e_k and h_k go to the sums over
    0 <= i <= m, 0 <= k-i <= n of e_i⊗e_{k-i} and e_i⊗h_{k-i} + h_i⊗e_{k-i},
    where factors at slice 0 or at the top slice are replaced by homology
    classes through ``identification``.
    """
    whole = hf_space(s, c, m + n)
    cs = whole.surface
    return _coproduct(whole, floer_space(cs, m), floer_space(cs, n), identification)


def _first_difference(lhs: F2LinearMap, rhs: F2LinearMap) -> tuple | None:
    if [flatten_label(x) for x in lhs.target.labels] != [flatten_label(x) for x in rhs.target.labels]:
        raise AssertionError("the two sides land in differently ordered spaces")
    diff = np.argwhere(lhs.matrix.bits != rhs.matrix.bits)
    if not len(diff):
        return None
    row, col = diff[np.lexsort((diff[:, 0], diff[:, 1]))][0]
    return flatten_label(lhs.source.labels[col]) + ("->",) + flatten_label(lhs.target.labels[row])


def _check(name: str, lhs: F2LinearMap, rhs: F2LinearMap) -> IdentityCheck:
    ce = _first_difference(lhs, rhs)
    return IdentityCheck(name, ce is None, ce)


def check_associativity(s: SurfaceSpec, c: TwistCurveSpec, m: int, n: int, p: int) -> StructureMapReport:
    a = hf_space(s, c, m)
    cs = a.surface
    b, d = floer_space(cs, n), floer_space(cs, p)
    ab, bd, abd = floer_space(cs, m + n), floer_space(cs, n + p), floer_space(cs, m + n + p)
    mu_ab, mu_bd = _product(a, b, ab), _product(b, d, bd)
    lhs = compose(_product(ab, d, abd), tensor(mu_ab, identity_map(d.space)))
    rhs = compose(_product(a, bd, abd), tensor(identity_map(a.space), mu_bd))
    # both sides read the source as a⊗b⊗d in the same lexicographic order
    rhs = F2LinearMap(lhs.source, rhs.target, rhs.degree_shift, rhs.matrix)
    return StructureMapReport(lhs, (_check("associativity", lhs, rhs),))


def check_coassociativity(
    s: SurfaceSpec,
    c: TwistCurveSpec,
    m: int,
    n: int,
    p: int,
    identification: BoundaryIdentification = resolve_boundary_generator,
) -> StructureMapReport:
    whole = hf_space(s, c, m + n + p)
    cs = whole.surface
    a, b, d = floer_space(cs, m), floer_space(cs, n), floer_space(cs, p)
    ab, bd = floer_space(cs, m + n), floer_space(cs, n + p)
    lhs = compose(
        tensor(_coproduct(ab, a, b, identification), identity_map(d.space)),
        _coproduct(whole, ab, d, identification),
    )
    rhs = compose(
        tensor(identity_map(a.space), _coproduct(bd, b, d, identification)),
        _coproduct(whole, a, bd, identification),
    )
    return StructureMapReport(lhs, (_check("coassociativity", lhs, rhs),))


def check_cocommutativity(
    s: SurfaceSpec,
    c: TwistCurveSpec,
    m: int,
    n: int,
    identification: BoundaryIdentification = resolve_boundary_generator,
) -> StructureMapReport:
    whole = hf_space(s, c, m + n)
    cs = whole.surface
    a, b = floer_space(cs, m), floer_space(cs, n)
    delta = _coproduct(whole, a, b, identification)
    lhs = compose(swap_map(a.space, b.space), delta)
    rhs = _coproduct(whole, b, a, identification)
    return StructureMapReport(delta, (_check("cocommutativity", lhs, rhs),))


def twist_columns(fs: FloerSpace) -> list[TwistGenerator]:
    return [lab for lab in fs.space.labels if isinstance(lab, TwistGenerator)]
