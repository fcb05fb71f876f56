"""End ODEs of twist-region sections and the cascade count behind the coproduct.

On each cylindrical end the ansatz y = -k t with x = x(s) turns the
Cauchy-Riemann system into

    dx/ds + k - coeff * chi(s) * x = 0,

solved with the integrating factor a(s) = -coeff * int chi. Distances are
measured from the end's boundary circle (s = N on the positive end,
s = -N on the negative ends); chi vanishes for the first ``gap`` units,
rises along a cubic smoothstep of width ``width`` and is 1 afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import NumericError, ShapeError
from .floer import ELLIPTIC, HYPERBOLIC, TwistGenerator, floer_space, hf_space, twist_term
from .gf2 import F2LinearMap, GradedF2Space
from .indexcalc import OrbitKind, SectionIndexData, fredholm_index
from .surface import SurfaceSpec, TwistCurveSpec

POSITIVE, NEGATIVE = "positive", "negative"
END_INF, END_1, END_2 = "inf", "1", "2"

# perturbing a circle of orbits leaves an elliptic orbit at the minimum of the
# Morse function on the circle and a hyperbolic one at the maximum
CRITICAL_POINT_OF = {ELLIPTIC: "min", HYPERBOLIC: "max"}


@dataclass(frozen=True)
class CutoffProfile:
    N: float = 1.0
    width: float = 1.0
    gap: float = 1.0

    def __post_init__(self) -> None:
        if self.N <= 0 or self.width < 0 or self.gap < 0:
            raise ShapeError("cutoff needs N > 0, width >= 0, gap >= 0")

    @property
    def breakpoints(self) -> tuple[float, float]:
        """Distances from the boundary where the transition starts and ends."""
        return self.gap, self.gap + self.width

    def chi(self, d):
        """Cutoff as a function of the distance d from the boundary circle."""
        if self.width == 0:  # a step; with gap = 0 this is chi = 1
            return np.where(np.asarray(d, dtype=float) >= self.gap, 1.0, 0.0)
        u = np.clip((np.asarray(d, dtype=float) - self.gap) / self.width, 0.0, 1.0)
        return u * u * (3.0 - 2.0 * u)

    def primitive(self, d: float) -> float:
        """P(d) = int_0^d chi, exact for the cubic smoothstep (0 for d <= gap)."""
        if d <= self.gap:
            return 0.0
        if d >= self.gap + self.width:
            return self.width / 2.0 + (d - self.gap - self.width)
        u = (d - self.gap) / self.width
        return self.width * (u ** 3 - u ** 4 / 2.0)


@dataclass(frozen=True)
class OdeProblem:
    coeff: int
    k: int
    sign: str = POSITIVE
    cutoff: CutoffProfile = CutoffProfile()
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.coeff < 1 or not 0 <= self.k <= self.coeff:
            raise ShapeError(f"need 0 <= k <= coeff, got k={self.k}, coeff={self.coeff}")
        if self.sign not in (POSITIVE, NEGATIVE):
            raise ShapeError(f"sign must be {POSITIVE!r} or {NEGATIVE!r}")
        if self.tolerance <= 0:
            raise ShapeError("tolerance must be positive")

    @property
    def limit(self) -> float:
        return self.k / self.coeff

    def s_of(self, d):
        N = self.cutoff.N
        return N + np.asarray(d) if self.sign == POSITIVE else -N - np.asarray(d)

    def d_of(self, s):
        N = self.cutoff.N
        return np.asarray(s) - N if self.sign == POSITIVE else -N - np.asarray(s)


def _exp_integral(cut: CutoffProfile, alpha: float, ref: float, lo: float, hi: float) -> float:
    """int_lo^hi exp(alpha * (P(d) - P(ref))) dd, piecewise on the cutoff's pieces.

    ``hi`` may be +inf when alpha < 0. Constant and linear pieces are done in
    closed form; the transition window goes to adaptive quadrature.
    """
    if hi < lo:
        return -_exp_integral(cut, alpha, ref, hi, lo)
    Pref = cut.primitive(ref)
    t0, t1 = cut.breakpoints
    total = 0.0
    # flat piece, chi = 0
    a, b = lo, min(hi, t0)
    if b > a:
        total += (b - a) * math.exp(-alpha * Pref)
    # transition piece
    a, b = max(lo, t0), min(hi, t1)
    if b > a:
        val, err = integrate.quad(
            lambda d: math.exp(alpha * (cut.primitive(d) - Pref)), a, b, epsabs=1e-15, epsrel=1e-13, limit=200
        )
        if err > 1e-11 * max(1.0, abs(val)):
            raise NumericError("transition quadrature did not converge", err)
        total += val
    # linear piece, chi = 1, P(d) = P(t1) + (d - t1)
    a = max(lo, t1)
    if hi > a:
        base = alpha * (cut.primitive(t1) - Pref)
        if math.isinf(hi):
            if alpha >= 0:
                raise NumericError("divergent tail integral")
            total += -math.exp(base + alpha * (a - t1)) / alpha
        else:
            total += (math.exp(base + alpha * (hi - t1)) - math.exp(base + alpha * (a - t1))) / alpha
    return total


def c_star(p: OdeProblem) -> float:
    """The unique positive-end constant with a bounded solution: k * int_0^inf e^{a}."""
    if p.sign != POSITIVE:
        raise ShapeError("only the positive end has a distinguished constant")
    if p.k == 0:
        return 0.0
    return p.k * _exp_integral(p.cutoff, -p.coeff, 0.0, 0.0, math.inf)


def evaluate(p: OdeProblem, c: float, d: float) -> float:
    """x at distance d from the boundary, written so no large exponentials cancel.

    Positive end: x = (c - c*) e^{coeff P(d)} + k int_d^inf e^{-coeff (P - P(d))}.
    Negative end: x = c e^{-coeff P(d)} + k int_0^d e^{coeff (P - P(d))}.
    """
    cut = p.cutoff
    if p.sign == POSITIVE:
        growth = math.exp(p.coeff * cut.primitive(d))
        dc = c - c_star(p)
        tail = p.k * _exp_integral(cut, -p.coeff, d, d, math.inf) if p.k else 0.0
        return (dc * growth if dc else 0.0) + tail
    decay = math.exp(-p.coeff * cut.primitive(d))
    body = p.k * _exp_integral(cut, p.coeff, d, 0.0, d) if p.k else 0.0
    return c * decay + body


@dataclass
class Trajectory:
    problem: OdeProblem
    c: float
    s: np.ndarray
    x: np.ndarray
    dxds: np.ndarray
    residual: np.ndarray
    relative_residual: np.ndarray = field(repr=False, default=None)

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual)))

    def to_rows(self) -> list[tuple[float, float]]:
        return list(zip(self.s.tolist(), self.x.tolist()))


_FD_STEP = 1e-3


def _derivative(p: OdeProblem, c: float, d: float) -> float:
    """dx/ds by a five-point stencil on the computed solution, not on the ODE."""
    h = _FD_STEP
    f = [evaluate(p, c, d + j * h) for j in (-2, -1, 1, 2)]
    dxdd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
    return dxdd if p.sign == POSITIVE else -dxdd


def sample_distances(p: OdeProblem, span: float = 30.0, count: int = 301) -> np.ndarray:
    """Uniform grid in the distance, nudged so no stencil straddles a kink of chi''."""
    d = np.linspace(0.0, span, count)
    margin = 3 * _FD_STEP
    for kink in p.cutoff.breakpoints:
        close = np.abs(d - kink) < margin
        d[close] = kink + np.where(d[close] < kink, -margin, margin)
    return d


def solve_end_ode(p: OdeProblem, c: float, span: float = 30.0, count: int = 301) -> Trajectory:
    """Sample x(s) on one end and check it against the ODE pointwise."""
    d = sample_distances(p, span, count)
    x = np.array([evaluate(p, c, di) for di in d])
    dx = np.array([_derivative(p, c, di) for di in d])
    chi = p.cutoff.chi(d)
    res = dx + p.k - p.coeff * chi * x
    rel = res / (1.0 + p.k + p.coeff * np.abs(x))
    traj = Trajectory(p, c, p.s_of(d), x, dx, res, rel)
    worst = float(np.max(np.abs(rel)))
    if not np.isfinite(worst) or worst > p.tolerance:
        raise NumericError(f"ODE residual {worst:.3e} above tolerance {p.tolerance:.1e}", worst)
    return traj


def shoot_c_infinity(m: int, n: int, k_inf: int, cutoff: CutoffProfile = CutoffProfile(),
                     tolerance: float = 1e-8, horizon: float = 30.0) -> float:
    """Constant on the (m+n)-end whose solution stays at k_inf/(m+n)."""
    if not 0 <= k_inf <= m + n:
        raise ShapeError("need 0 <= k_inf <= m + n")
    p = OdeProblem(m + n, k_inf, POSITIVE, cutoff)
    c = c_star(p)
    miss = abs(evaluate(p, c, horizon) - p.limit)
    if miss >= tolerance:
        raise NumericError(f"x(N + {horizon}) misses k/(m+n) by {miss:.3e}", miss)
    return c


def shoot_by_bisection(p: OdeProblem, length: float = 4.0, iterations: int = 48) -> float:
    """Independent check on c*: integrate forward and bisect on where x(S) ends up."""
    if p.sign != POSITIVE:
        raise ShapeError("bisection shooting is for the positive end")
    cut = p.cutoff
    S = cut.breakpoints[1] + length
    rhs = lambda d, x: [p.coeff * float(cut.chi(d)) * x[0] - p.k]

    def overshoots(c: float) -> bool:
        sol = integrate.solve_ivp(rhs, (0.0, S), [c], method="DOP853", rtol=1e-12, atol=1e-14,
                                  t_eval=[S], first_step=1e-3, max_step=0.05)
        return sol.y[0, -1] > p.limit

    lo, hi = -1.0, p.k * (cut.breakpoints[1] + 1.0 / p.coeff) + 1.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if overshoots(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class AnsatzReport:
    max_first: float
    max_second: float

    @property
    def max_residual(self) -> float:
        return max(self.max_first, self.max_second)

    def to_json(self) -> dict:
        return {"max_first": self.max_first, "max_second": self.max_second}


def verify_section_ansatz(p: OdeProblem, c: float | None = None, y_shift: float = 0.0,
                          y_sign: int = -1, count: int = 61) -> AnsatzReport:
    """Plug x(s) and y = y_sign * k * t + y_shift into the Cauchy-Riemann pair

        x_t + y_s + x F = 0,   y_t - x_s + x G = 0,   F = 0, G = coeff * chi(s),

    on a grid of (s, t) and return the largest residual of each equation.
    Partial derivatives of y are taken by central differences.
    """
    if c is None:
        c = c_star(p) if p.sign == POSITIVE else 1.0
    d = sample_distances(p, 30.0, count)
    ts = np.linspace(0.0, 1.0, 5)
    h = 1e-4
    y = lambda s, t: y_sign * p.k * t + y_shift
    first, second = 0.0, 0.0
    for di in d:
        s = float(p.s_of(di))
        x = evaluate(p, c, di)
        xs = _derivative(p, c, di)
        G = p.coeff * float(p.cutoff.chi(di))
        for t in ts:
            ys = (y(s + h, t) - y(s - h, t)) / (2 * h)
            yt = (y(s, t + h) - y(s, t - h)) / (2 * h)
            first = max(first, abs(0.0 + ys + x * 0.0))
            second = max(second, abs(yt - xs + x * G))
    return AnsatzReport(float(first), float(second))


# ---------------------------------------------------------------------------
# moduli spaces and cascades


@dataclass(frozen=True)
class EndData:
    coeff: int
    k: int
    sign: str
    constant: float
    limit_error: float
    slope_error: float


@lru_cache(maxsize=None)
def end_data(coeff: int, k: int, sign: str, cutoff: CutoffProfile = CutoffProfile(),
             horizon: float = 30.0, c_negative: float = 1.0) -> EndData:
    """Constant, limit and boundary slope of one end, cached per (coeff, k, sign)."""
    p = OdeProblem(coeff, k, sign, cutoff)
    c = c_star(p) if sign == POSITIVE else c_negative
    far = horizon if sign == POSITIVE else horizon - 11.0
    limit_error = abs(evaluate(p, c, far) - p.limit)
    slope_error = abs(_derivative(p, c, cutoff.gap / 2) + k)
    return EndData(coeff, k, sign, c, limit_error, slope_error)


@dataclass(frozen=True)
class ModuliDescriptor:
    kind: str  # "circle" or "empty"
    normalized: tuple[int, int, int] | None
    reason: str
    c_inf: float | None = None
    c_neg: float | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "normalized": None if self.normalized is None else list(self.normalized),
            "reason": self.reason,
            "c_inf": self.c_inf,
            "c_neg": self.c_neg,
        }


def normalize_ends(m: int, n: int, k_inf: int, k1: int, k2: int) -> tuple[int, int, int] | None:
    """Shift by multiples of (m+n, m, n) into 0 <= k1 <= m, 0 <= k2 <= n, if possible."""
    lo = max(-((m - k1) // m), -((n - k2) // n))  # ceil((k1 - m)/m), ceil((k2 - n)/n)
    hi = min(k1 // m, k2 // n)
    if lo > hi:
        return None
    t = hi
    return (k_inf - t * (m + n), k1 - t * m, k2 - t * n)


def moduli_descriptor(m: int, n: int, k_inf: int, k1: int, k2: int,
                      cutoff: CutoffProfile = CutoffProfile(), tolerance: float = 1e-6) -> ModuliDescriptor:
    if k_inf != k1 + k2:
        return ModuliDescriptor("empty", None, "homology forces k_inf = k1 + k2")
    norm = normalize_ends(m, n, k_inf, k1, k2)
    if norm is None:
        return ModuliDescriptor("empty", None, "no shift puts both negative ends in the twist region")
    K, a, b = norm
    top = end_data(m + n, K, POSITIVE, cutoff)
    ends = [top, end_data(m, a, NEGATIVE, cutoff), end_data(n, b, NEGATIVE, cutoff)]
    worst = max(max(e.limit_error, e.slope_error) for e in ends)
    if worst > tolerance:
        return ModuliDescriptor("empty", norm, f"end construction failed (error {worst:.2e})")
    c_neg = top.constant + 1.0  # any constant above c_inf glues to the middle cover
    return ModuliDescriptor("circle", norm, "circle of y-translates", top.constant, c_neg)


@dataclass(frozen=True)
class CascadeSpec:
    m: int
    n: int
    k_inf: int
    k1: int
    k2: int
    fixed_end: str

    def __post_init__(self) -> None:
        if self.k_inf != self.k1 + self.k2 or not (0 <= self.k1 <= self.m and 0 <= self.k2 <= self.n):
            raise ShapeError(f"inadmissible cascade ends {(self.k_inf, self.k1, self.k2)}")
        if self.fixed_end not in (END_INF, END_1, END_2):
            raise ShapeError(f"fixed end must be one of inf, 1, 2, got {self.fixed_end!r}")

    def generators(self) -> tuple[tuple[str, int, int], tuple[str, int, int], tuple[str, int, int]]:
        """(kind, slice, power) of the input and the two outputs.

        A fixed positive end carries e, a free one h; on the negative ends it is
        the other way round.
        """
        top = ELLIPTIC if self.fixed_end == END_INF else HYPERBOLIC
        one = HYPERBOLIC if self.fixed_end == END_1 else ELLIPTIC
        two = HYPERBOLIC if self.fixed_end == END_2 else ELLIPTIC
        return (
            (top, self.k_inf, self.m + self.n),
            (one, self.k1, self.m),
            (two, self.k2, self.n),
        )


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _phase(end: str, power: int, k: int) -> float:
    """Generic location of the maximum of the Morse function on one orbit circle."""
    seed = {END_INF: 1, END_1: 2, END_2: 3}[end] * 1009 + power * 101 + k
    return (seed * _GOLDEN) % 1.0


def count_cascades(cs: CascadeSpec, cutoff: CutoffProfile = CutoffProfile()) -> int:
    """Number of one-level cascades with the given ends and fixed end.

    The circle of sections is swept by y-translation; pinning one end to the
    critical point of its Morse function picks exactly one member, and for
    generic Morse data the other ends then miss their critical points.
    """
    desc = moduli_descriptor(cs.m, cs.n, cs.k_inf, cs.k1, cs.k2, cutoff)
    if desc.kind != "circle":
        return 0
    free = SectionIndexData((OrbitKind.HYPERBOLIC,), (OrbitKind.ELLIPTIC, OrbitKind.ELLIPTIC))
    pinned = SectionIndexData(free.positive_ends, free.negative_ends, fixed_ends=1)
    if fredholm_index(free) != 1 or fredholm_index(pinned) != 0:
        raise NumericError("twist-region section has unexpected index")
    ends = {END_INF: (cs.m + cs.n, cs.k_inf), END_1: (cs.m, cs.k1), END_2: (cs.n, cs.k2)}
    power, k = ends[cs.fixed_end]
    peak = _phase(cs.fixed_end, power, k)
    # a fixed negative end sits at the maximum, a fixed positive end at the minimum
    target = peak if cs.fixed_end != END_INF else (peak + 0.5) % 1.0
    solutions = [target]  # y0 -> y0 + offset is a bijection of the circle; offsets are 0
    count = 0
    for y0 in solutions:
        clash = any(
            min(abs(y0 - _phase(e, pw, kk)) % 1.0, abs(y0 - _phase(e, pw, kk) - 0.5) % 1.0) < 1e-12
            for e, (pw, kk) in ends.items()
            if e != cs.fixed_end
        )
        if not clash:
            count += 1
    return count


def coproduct_from_cascades(m: int, n: int, s: SurfaceSpec = SurfaceSpec(2, 0),
                            c: TwistCurveSpec = TwistCurveSpec.nonseparating(),
                            cutoff: CutoffProfile = CutoffProfile()) -> F2LinearMap:
    """Coproduct on the interior twist generators of HF(φ^{m+n}), read off from cascades."""
    whole = hf_space(s, c, m + n)
    cs = whole.surface
    a, b = floer_space(cs, m), floer_space(cs, n)
    source_labels = [lab for lab in whole.space.labels if isinstance(lab, TwistGenerator)]
    source = GradedF2Space(tuple((lab, lab.degree) for lab in source_labels))
    images: dict = {lab: [] for lab in source_labels}
    for k_inf in range(1, m + n):
        for k1 in range(max(0, k_inf - n), min(m, k_inf) + 1):
            for fixed in (END_INF, END_1, END_2):
                spec = CascadeSpec(m, n, k_inf, k1, k_inf - k1, fixed)
                if count_cascades(spec, cutoff) % 2 == 0:
                    continue
                (tk, ti, tp), (ok1, oi1, op1), (ok2, oi2, op2) = spec.generators()
                left = twist_term(ok1, oi1, op1, cs)
                right = twist_term(ok2, oi2, op2, cs)
                images[TwistGenerator(tk, ti, tp)] += [(u, v) for u in left for v in right]
    return F2LinearMap.from_columns(source, a.space.tensor(b.space), 0, images)
