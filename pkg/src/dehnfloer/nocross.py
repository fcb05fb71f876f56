"""Homology bookkeeping in H1(X_D) = Z^3 and the no-crossing case analyses as finite searches.

A section of the pair-of-pants bundle restricted to the twist region meets
each slice x = const in a class (p, q1, q2). Local positivity of energy says
p + x(m q1 + n q2) > 0 whenever the slice meets the section, and zero
wrapping fixes p at the slices near x = 0 and x = 1. Each case of the
argument that a section cannot cross from the twist region into the rest of
the surface becomes one branch: a list of integer variables with finite
domains plus named linear constraints. Every branch is searched exhaustively
for |q| <= Q and is expected to have no solutions.

Sign convention for a region between a lower and an upper slice:
    upper - lower = (negative punctures inside) - (positive punctures inside).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _core
from .errors import ShapeError

PRODUCT, COPRODUCT, CYLINDER = "product", "coproduct", "cylinder"
MODES = (PRODUCT, COPRODUCT, CYLINDER)

FIRST, SECOND, SUM = "1", "2", "inf"
OP_EQ, OP_GE, OP_LE = 0, 1, 2
_OP_TEXT = {OP_EQ: "=", OP_GE: ">=", OP_LE: "<="}


class H1ClassXD(NamedTuple):
    p: int
    q1: int
    q2: int

    def __add__(self, other):  # type: ignore[override]
        return H1ClassXD(self.p + other.p, self.q1 + other.q1, self.q2 + other.q2)

    def __sub__(self, other):
        return H1ClassXD(self.p - other.p, self.q1 - other.q1, self.q2 - other.q2)

    def scale(self, k: int) -> "H1ClassXD":
        return H1ClassXD(k * self.p, k * self.q1, k * self.q2)


def local_energy_lhs(c: H1ClassXD, x: Fraction | int, m: int, n: int) -> Fraction:
    """p + x(m q1 + n q2); positive on every slice a non-horizontal section meets."""
    return Fraction(c.p) + Fraction(x) * (m * c.q1 + n * c.q2)


def cylinder_local_energy_lhs(p: int, q: int, x: Fraction | int, m: int) -> Fraction:
    """p + m x q, the same quantity for cylinders in the symplectization."""
    return Fraction(p) + m * Fraction(x) * q


def end_coefficient(end: str, m: int, n: int) -> int:
    return {FIRST: m, SECOND: n, SUM: m + n}[end]


def orbit_class(end: str, slice_index: int, m: int, n: int) -> H1ClassXD:
    """Class of the Reeb orbit at x = slice/coef on the given end."""
    coef = end_coefficient(end, m, n)
    if not 0 <= slice_index <= coef:
        raise ShapeError(f"slice {slice_index} outside 0..{coef} for end {end}")
    q1 = 1 if end in (FIRST, SUM) else 0
    q2 = 1 if end in (SECOND, SUM) else 0
    return H1ClassXD(-slice_index, q1, q2)


# ---------------------------------------------------------------------------
# branch description


@dataclass(frozen=True)
class Variable:
    name: str
    fields: tuple[str, ...]
    values: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Row:
    terms: tuple[tuple[str, str, int], ...]  # (variable, field, coefficient)
    op: int
    rhs: int


@dataclass(frozen=True)
class Constraint:
    name: str
    rows: tuple[Row, ...]


@dataclass(frozen=True)
class Branch:
    name: str
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]

    @property
    def size(self) -> int:
        out = 1
        for v in self.variables:
            out *= len(v.values)
        return out


@dataclass(frozen=True)
class CrossingScenario:
    mode: str
    m: int
    n: int
    bound: int
    strict: bool = True

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ShapeError(f"unknown mode {self.mode!r}")
        if self.m < 1 or self.n < 1 or self.bound < 1:
            raise ShapeError("m, n and the bound Q must be positive")


@dataclass(frozen=True)
class FeasibleConfig:
    branch: str
    assignment: dict
    trace: tuple[str, ...]

    def to_json(self) -> dict:
        return {"branch": self.branch, "config": self.assignment, "trace": list(self.trace)}


@dataclass(frozen=True)
class CertificateEntry:
    branch: str
    config: dict
    failing_constraint: str
    count: int

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "config": self.config,
            "failing_constraint": self.failing_constraint,
            "count": self.count,
        }


@dataclass
class EnumerationResult:
    scenario: CrossingScenario
    feasible: list[FeasibleConfig] = field(default_factory=list)
    certificate: list[CertificateEntry] = field(default_factory=list)
    searched: int = 0

    @property
    def empty(self) -> bool:
        return not self.feasible


class _Builder:
    """Shared vocabulary for the branches of one scenario."""

    def __init__(self, sc: CrossingScenario):
        self.sc = sc
        self.m, self.n = sc.m, sc.n
        self.cyl = sc.mode == CYLINDER
        if self.cyl:
            # one positive and one negative end, both of period m; q2 stays 0
            self.ends = {FIRST: +1, SUM: -1}
            self.nq = 0
        else:
            sign_sum = -1 if sc.mode == PRODUCT else +1
            self.ends = {FIRST: -sign_sum, SECOND: -sign_sum, SUM: sign_sum}
            self.nq = self.n

    # orbit classes -------------------------------------------------------
    def coef(self, end: str) -> int:
        if self.cyl:
            return self.m
        return end_coefficient(end, self.m, self.n)

    def orbit(self, end: str, k: int) -> tuple[int, int, int]:
        if self.cyl:
            return (-k, 1, 0)
        return tuple(orbit_class(end, k, self.m, self.n))

    def puncture(self, name: str, end: str, slices: Iterable[int]) -> Variable:
        values = [(0, 0, 0, 0)] + [(1, *self.orbit(end, k)) for k in slices]
        return Variable(name, ("flag", "p", "q1", "q2"), tuple(values))

    def edge_punctures(self, tag: str, side: int) -> list[Variable]:
        """One puncture variable per end at x = side (0 or 1)."""
        return [self.puncture(f"{tag}{end}", end, [0 if side == 0 else self.coef(end)]) for end in self.ends]

    def interior_punctures(self, tag: str, include_side: int | None = None) -> list[Variable]:
        out = []
        for end in self.ends:
            ks = list(range(1, self.coef(end)))
            if include_side is not None:
                ks.append(0 if include_side == 0 else self.coef(end))
            out.append(self.puncture(f"{tag}{end}", end, sorted(ks)))
        return out

    def slice_class(self, name: str, side: int) -> Variable:
        """Class of C meeting a slice near x = side; p fixed by zero wrapping."""
        Q = self.sc.bound
        q2s = range(-Q, Q + 1) if not self.cyl else (0,)
        values = []
        for q1 in range(-Q, Q + 1):
            for q2 in q2s:
                p = 0 if side == 0 else -(self.m * q1 + self.nq * q2)
                values.append((p, q1, q2))
        return Variable(name, ("p", "q1", "q2"), tuple(values))

    # constraints ----------------------------------------------------------
    def energy(self, var: str, sign: int, label: str) -> Constraint:
        """Slice just above (+1) or below (-1) x = 0 or 1.

        p + x(m q1 + n q2) > 0 reduces to m q1 + n q2 >= 1 above and <= -1
        below; relaxing strictness turns these into >= 0 and <= 0.
        """
        bound = (1 if self.sc.strict else 0) * sign
        op = OP_GE if sign > 0 else OP_LE
        row = Row(((var, "q1", self.m), (var, "q2", self.nq)), op, bound)
        rel = "> 0" if self.sc.strict else ">= 0"
        return Constraint(f"local energy at {label}: p + x(m q1 + n q2) {rel}", (row,))

    def balance(self, label: str, upper: str | None, lower: str | None, punct: Sequence[Variable]) -> Constraint:
        rows = []
        for comp in ("p", "q1", "q2"):
            if self.cyl and comp == "q2":
                continue
            terms = []
            if upper:
                terms.append((upper, comp, 1))
            if lower:
                terms.append((lower, comp, -1))
            for v in punct:
                # upper - lower - neg + pos = 0
                terms.append((v.name, comp, self.ends[_end_of(v.name)]))
            rows.append(Row(tuple(terms), OP_EQ, 0))
        return Constraint(f"homology balance over {label}", tuple(rows))

    def budget(self, punct: Sequence[Variable]) -> list[Constraint]:
        out = []
        for end in self.ends:
            terms = tuple((v.name, "flag", 1) for v in punct if _end_of(v.name) == end)
            if len(terms) > 1:
                out.append(Constraint(f"one puncture on end {end}", (Row(terms, OP_LE, 1),)))
        return out


def _end_of(name: str) -> str:
    for end in (SUM, FIRST, SECOND):
        if name.endswith(end):
            return end
    raise ShapeError(name)


def _restrict(var: Variable, allowed: bool) -> Variable:
    """Keep only the 'no puncture' or only the 'puncture' values."""
    vals = tuple(v for v in var.values if (v[0] == 1) == allowed)
    return Variable(var.name, var.fields, vals)


def _with_flags(edge: list[Variable], pattern: dict[str, int]) -> list[Variable]:
    return [_restrict(v, bool(pattern[_end_of(v.name)])) if _end_of(v.name) in pattern else v for v in edge]


def _near_patterns(b: _Builder) -> dict[str, list[dict[str, int]]]:
    """Split the puncture flags at the crossing side into the cases of the argument."""
    flags = list(itertools.product((0, 1), repeat=3))
    if b.sc.mode == PRODUCT:
        case = [dict(zip((FIRST, SECOND, SUM), f)) for f in flags if f[2] == 1]
        pre = [dict(zip((FIRST, SECOND, SUM), f)) for f in flags if f[2] == 0]
        return {"prelim (negative end absent at the crossing)": pre, "": case}
    both = [{FIRST: 1, SECOND: 1, SUM: 0}]
    one = [{FIRST: 1, SECOND: 0, SUM: 0}, {FIRST: 0, SECOND: 1, SUM: 0}]
    pre = [dict(zip((FIRST, SECOND, SUM), f)) for f in flags
           if dict(zip((FIRST, SECOND, SUM), f)) not in both + one]
    return {"prelim (no negative end or a positive end at the crossing)": pre,
            "case1 (both negative ends at the crossing)": both,
            "case2 (one negative end at the crossing)": one}


def build_branches(sc: CrossingScenario) -> list[Branch]:
    b = _Builder(sc)
    branches: list[Branch] = []
    for side in (0, 1):
        far = 1 - side
        tag = f"{sc.mode}/x{side}"
        # slices just inside and outside the crossing side
        inner_sign = +1 if side == 0 else -1
        inner = b.slice_class("near_in", side)
        outer = b.slice_class("near_out", side)
        near_in_lbl = f"x={side}{'+' if side == 0 else '-'}eps1"
        near_out_lbl = f"x={side}{'-' if side == 0 else '+'}eps1"
        near_cons = [b.energy("near_in", inner_sign, near_in_lbl), b.energy("near_out", -inner_sign, near_out_lbl)]
        edge = b.edge_punctures("D", side)
        upper, lower = ("near_in", "near_out") if side == 0 else ("near_out", "near_in")
        near_bal = b.balance(f"[{side}-eps1, {side}+eps1]", upper, lower, edge)

        if b.cyl:
            branches.append(Branch(f"{tag}/near", tuple(edge + [inner, outer]), tuple(near_cons + [near_bal])))
            continue

        for case, patterns in _near_patterns(b).items():
            for pat in patterns:
                pat_edge = _with_flags(edge, pat)
                pat_tag = "".join(str(pat[e]) for e in (FIRST, SECOND, SUM))
                head = tuple(pat_edge + [inner, outer])
                base = near_cons + [near_bal]
                if case.startswith("prelim"):
                    branches.append(Branch(f"{tag}/{case}/d={pat_tag}", head, tuple(base)))
                    continue
                prefix = f"{tag}/{case + '/' if case else ''}d={pat_tag}"
                far_in_lbl = f"x={far}{'-' if far == 1 else '+'}eps2"
                far_out_lbl = f"x={far}{'+' if far == 1 else '-'}eps2"
                # the region between the crossing and the far side, facing inward
                def region(upper_far: str | None, punct: list[Variable]) -> Constraint:
                    if side == 0:
                        return b.balance(f"[eps1, {far_in_lbl[2:]}]", upper_far, "near_in", punct)
                    return b.balance(f"[{far_in_lbl[2:]}, 1-eps1]", "near_in", upper_far, punct)

                # far inner slice empty: only interior punctures in between
                mid = b.interior_punctures("I")
                branches.append(Branch(
                    f"{prefix}/far {far_in_lbl} empty",
                    head + tuple(mid),
                    tuple(base + [region(None, mid)] + b.budget(pat_edge + mid)),
                ))
                # far outer slice empty: punctures up to and including x = far
                mid_out = b.interior_punctures("I", include_side=far)
                lbl_out = (f"[eps1, {far_out_lbl[2:]}]" if side == 0 else f"[{far_out_lbl[2:]}, 1-eps1]")
                bal_out = (b.balance(lbl_out, None, "near_in", mid_out) if side == 0
                           else b.balance(lbl_out, "near_in", None, mid_out))
                branches.append(Branch(
                    f"{prefix}/far {far_out_lbl} empty",
                    head + tuple(mid_out),
                    tuple(base + [bal_out] + b.budget(pat_edge + mid_out)),
                ))
                # both far slices met: a second crossing at x = far
                far_in = b.slice_class("far_in", far)
                far_out = b.slice_class("far_out", far)
                far_edge = b.edge_punctures("E", far)
                far_sign = -1 if far == 1 else +1
                mid_bal = (b.balance(f"[eps1, 1-eps2]", "far_in", "near_in", mid) if side == 0
                           else b.balance(f"[eps2, 1-eps1]", "near_in", "far_in", mid))
                f_upper, f_lower = ("far_out", "far_in") if far == 1 else ("far_in", "far_out")
                branches.append(Branch(
                    f"{prefix}/both far slices met",
                    head + tuple(mid) + (far_in,) + tuple(far_edge) + (far_out,),
                    tuple(base + [
                        mid_bal,
                        b.energy("far_in", far_sign, far_in_lbl),
                        b.energy("far_out", -far_sign, far_out_lbl),
                        b.balance(f"[{far}-eps2, {far}+eps2]", f_upper, f_lower, far_edge),
                    ] + b.budget(pat_edge + mid + far_edge)),
                ))
    return branches


# ---------------------------------------------------------------------------
# search


def _compile(branch: Branch):
    names = [v.name for v in branch.variables]
    pos = {name: i for i, name in enumerate(names)}
    widths = np.array([len(v.fields) for v in branch.variables], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(widths)[:-1]]).astype(np.int64)
    comp_index = {}
    for v, off in zip(branch.variables, offsets):
        for j, f in enumerate(v.fields):
            comp_index[(v.name, f)] = int(off) + j
    sizes = np.array([len(v.values) for v in branch.variables], dtype=np.int64)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
    wmax = int(widths.max())
    values = np.zeros((int(sizes.sum()), wmax), dtype=np.int64)
    for v, st in zip(branch.variables, starts):
        values[st: st + len(v.values), : len(v.fields)] = np.array(v.values, dtype=np.int64)

    # order constraints by the last variable they touch, keep declared order otherwise
    def level(c: Constraint) -> int:
        return max(pos[t[0]] for r in c.rows for t in r.terms)

    order = sorted(range(len(branch.constraints)), key=lambda i: (level(branch.constraints[i]), i))
    cons = [branch.constraints[i] for i in order]
    n_comp = int(widths.sum())
    rows = [r for c in cons for r in c.rows]
    coef = np.zeros((len(rows), n_comp), dtype=np.int64)
    for i, r in enumerate(rows):
        for var, f, a in r.terms:
            coef[i, comp_index[(var, f)]] += a
    rhs = np.array([r.rhs for r in rows], dtype=np.int64)
    ops = np.array([r.op for r in rows], dtype=np.int64)
    con_rows = np.concatenate([[0], np.cumsum([len(c.rows) for c in cons])]).astype(np.int64)
    levels = np.array([level(c) for c in cons], dtype=np.int64)
    return cons, (values, starts, sizes, offsets, widths, coef, rhs, ops, con_rows, levels)


def _assignment(branch: Branch, idx: Sequence[int]) -> dict:
    out = {}
    for v, i in zip(branch.variables, idx):
        out[v.name] = dict(zip(v.fields, v.values[int(i)]))
    return out


def search_branch(branch: Branch) -> tuple[list[FeasibleConfig], list[CertificateEntry]]:
    cons, arrays = _compile(branch)
    killed, witness, survivors = _core.enumerate_linear(*arrays)
    cert = [
        CertificateEntry(branch.name, _assignment(branch, witness[c]), cons[c].name, int(killed[c]))
        for c in range(len(cons))
        if killed[c]
    ]
    trace = tuple(c.name for c in cons)
    feasible = [FeasibleConfig(branch.name, _assignment(branch, s), trace) for s in survivors]
    return feasible, cert


def enumerate_crossing_configs(sc: CrossingScenario) -> EnumerationResult:
    result = EnumerationResult(sc)
    for br in build_branches(sc):
        feas, cert = search_branch(br)
        result.feasible += feas
        result.certificate += cert
        result.searched += br.size
    return result


def verify_grid(
    modes: Sequence[str],
    ms: Iterable[int],
    ns: Iterable[int],
    bound: int,
    strict: bool = True,
    workers: int = 1,
) -> list[EnumerationResult]:
    """Run every (mode, m, n) scenario, optionally in worker processes."""
    scenarios = [CrossingScenario(mode, m, n, bound, strict) for mode in modes for m in ms for n in ns]
    if workers <= 1:
        return [enumerate_crossing_configs(sc) for sc in scenarios]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(enumerate_crossing_configs, scenarios))


# ---------------------------------------------------------------------------
# ends on a single slice


@dataclass(frozen=True)
class SliceVerdict:
    allowed: bool
    reason: str
    interval: tuple[Fraction, Fraction] | None = None
    x0: Fraction | None = None
    witness_class: H1ClassXD | None = None
    energy: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "allowed": self.allowed,
            "reason": self.reason,
            "interval": None if self.interval is None else [str(x) for x in self.interval],
            "x0": None if self.x0 is None else str(self.x0),
            "witness_class": None if self.witness_class is None else list(self.witness_class),
            "energy": None if self.energy is None else str(self.energy),
        }


def same_slice_check(m: int, n: int, i: int, j: int, k: int) -> SliceVerdict:
    """Can a section in the twist region have ends at x = i/m, j/n and k/(m+n)?

    Only if k = i + j and all three x values agree. Otherwise, just above the
    negative end and below the higher positive end, the slice class is that
    of the higher positive end alone, and its local energy is negative.
    """
    if not (0 <= i <= m and 0 <= j <= n and 0 <= k <= m + n):
        raise ShapeError("slice indices out of range")
    if k != i + j:
        return SliceVerdict(False, "homology: the negative end must satisfy k = i + j")
    xi, xj, xk = Fraction(i, m), Fraction(j, n), Fraction(k, m + n)
    if xi == xj:
        return SliceVerdict(True, "all ends over the same slice")
    # k/(m+n) is the mediant, strictly between i/m and j/n
    if xi > xj:
        end, top, idx = FIRST, xi, i
    else:
        end, top, idx = SECOND, xj, j
    x0 = (xk + top) / 2
    cls = orbit_class(end, idx, m, n)
    energy = local_energy_lhs(cls, x0, m, n)
    return SliceVerdict(
        False,
        f"slice class {tuple(cls)} on ({xk}, {top}) has p + x(m q1 + n q2) <= 0",
        (xk, top),
        x0,
        cls,
        energy,
    )
