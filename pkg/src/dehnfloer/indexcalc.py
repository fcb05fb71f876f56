"""Conley-Zehnder values, Fredholm indices and wrapping-number bookkeeping.

Everything is relative to the one fixed trivialization used throughout, so
no trivialization argument appears.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import ArityError, InvalidCurveError
from .surface import SurfaceSpec, TwistCurveSpec


class OrbitKind(str, Enum):
    MORSE_MIN = "morse_min"
    MORSE_SADDLE = "morse_saddle"
    MORSE_MAX = "morse_max"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"


_CZ = {
    OrbitKind.MORSE_MIN: -1,
    OrbitKind.ELLIPTIC: -1,
    OrbitKind.MORSE_SADDLE: 0,
    OrbitKind.HYPERBOLIC: 0,
    OrbitKind.MORSE_MAX: 1,
}


def cz(kind: OrbitKind | str) -> int:
    return _CZ[OrbitKind(kind)]


@dataclass(frozen=True)
class Topology:
    """Data entering the Chern/wrapping relation.

    ``genera`` has one entry per wrapping number: (g,) when γ is
    non-separating, (g1, g2) when it separates. ``boundary[i]`` says whether
    that piece touches ∂Σ, in which case its wrapping number is identically 0.
    """

    separating: bool
    genera: tuple[int, ...]
    boundary: tuple[bool, ...]

    def __post_init__(self) -> None:
        if len(self.genera) != (2 if self.separating else 1) or len(self.boundary) != len(self.genera):
            raise ArityError("topology needs one genus and one boundary flag per wrapping number")

    @classmethod
    def closed(cls, genus: int) -> "Topology":
        return cls(False, (genus,), (False,))

    @classmethod
    def split(cls, g1: int, g2: int, b1: bool = False, b2: bool = False) -> "Topology":
        return cls(True, (g1, g2), (b1, b2))

    @classmethod
    def from_surface(cls, s: SurfaceSpec, c: TwistCurveSpec) -> "Topology":
        if not c.is_separating:
            return cls(False, (s.genus,), (s.boundary_count > 0,))
        g1, b1, g2, b2 = c.split
        return cls(True, (g1, g2), (b1 > 0, b2 > 0))

    @property
    def coefficients(self) -> tuple[int, ...]:
        """Chern number per unit of each wrapping number (0 where forced by boundary)."""
        if not self.separating:
            (g,) = self.genera
            return (0 if self.boundary[0] else 2 - 2 * g,)
        return tuple(0 if b else 1 - 2 * g for g, b in zip(self.genera, self.boundary))

    def to_json(self) -> dict:
        return {"separating": self.separating, "genera": list(self.genera), "boundary": list(self.boundary)}


def _wrapping_tuple(topology: Topology, wrapping: int | Sequence[int]) -> tuple[int, ...]:
    eta = (wrapping,) if isinstance(wrapping, int) else tuple(wrapping)
    if len(eta) != len(topology.genera):
        raise ArityError(f"expected {len(topology.genera)} wrapping numbers, got {len(eta)}")
    return eta


def chern_from_wrapping(topology: Topology, wrapping: int | Sequence[int]) -> int:
    eta = _wrapping_tuple(topology, wrapping)
    return sum(k * e for k, e in zip(topology.coefficients, eta))


@dataclass(frozen=True)
class SectionIndexData:
    positive_ends: tuple[OrbitKind, ...]
    negative_ends: tuple[OrbitKind, ...]
    wrapping: int | tuple[int, ...] = 0
    topology: Topology = Topology.closed(2)
    fixed_ends: int = 0

    def __post_init__(self) -> None:
        shape = (len(self.positive_ends), len(self.negative_ends))
        if shape not in ((2, 1), (1, 2), (1, 1)):
            raise ArityError(f"ends {shape} fit no cobordism (need 2+1, 1+2 or 1+1)")
        if not 0 <= self.fixed_ends <= sum(shape):
            raise ArityError("more fixed ends than ends")
        object.__setattr__(self, "positive_ends", tuple(OrbitKind(k) for k in self.positive_ends))
        object.__setattr__(self, "negative_ends", tuple(OrbitKind(k) for k in self.negative_ends))


def fredholm_index(d: SectionIndexData) -> int:
    """-1 + 2 c1 + sum CZ(+) - sum CZ(-), minus one per end pinned to a critical point."""
    chern = chern_from_wrapping(d.topology, d.wrapping)
    return (
        -1
        + 2 * chern
        + sum(cz(k) for k in d.positive_ends)
        - sum(cz(k) for k in d.negative_ends)
        - d.fixed_ends
    )


@dataclass(frozen=True)
class MonotonicityVerdict:
    satisfied: bool
    failing_bullet: int | None
    reason: str
    symplectomorphism_monotone: bool = True
    cobordism_monotone: bool = True

    def to_json(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "failing_bullet": self.failing_bullet,
            "reason": self.reason,
            "symplectomorphism_monotone": self.symplectomorphism_monotone,
            "cobordism_monotone": self.cobordism_monotone,
        }


def check_monotonicity(s: SurfaceSpec, c: TwistCurveSpec) -> MonotonicityVerdict:
    """Test the genus and boundary conditions needed by the product and coproduct.

    Bullet 1 (γ non-separating): ∂Σ nonempty, or Σ closed of genus ≥ 2.
    Bullet 2 (γ separating): each side has boundary or genus ≥ 2.
    """
    cob = s.boundary_count > 0 or s.genus >= 2
    if not c.is_separating:
        if s.genus < 1:
            raise InvalidCurveError("a genus-0 surface has no non-separating curve")
        if s.boundary_count > 0 or s.genus >= 2:
            return MonotonicityVerdict(True, None, "non-separating: boundary or genus >= 2", True, cob)
        return MonotonicityVerdict(
            False, 1, f"non-separating on a closed surface of genus {s.genus} < 2", True, cob
        )
    g1, b1, g2, b2 = c.split
    if g1 + g2 != s.genus or b1 + b2 != s.boundary_count:
        raise InvalidCurveError(f"split {c.split} does not match the surface")
    bad = [i for i, (g, b) in enumerate(((g1, b1), (g2, b2)), 1) if b == 0 and g < 2]
    if bad:
        return MonotonicityVerdict(
            False, 2, f"side {bad[0]} has no boundary and genus < 2", True, cob
        )
    return MonotonicityVerdict(True, None, "separating: each side has boundary or genus >= 2", True, cob)


@dataclass(frozen=True)
class WrappingVerdict:
    forced_zero: bool
    max_wrapping: tuple[int | None, ...]  # None = unbounded
    inequality: str

    def to_json(self) -> dict:
        return {
            "forced_zero": self.forced_zero,
            "max_wrapping": list(self.max_wrapping),
            "inequality": self.inequality,
        }


def force_zero_wrapping(topology: Topology, index: int = 0) -> WrappingVerdict:
    """Largest wrapping numbers compatible with ind <= 2 + 2 c1, given η >= 0.

    With at most 1 from each positive end and -1 from the negative end, the
    index of a section is bounded by 2 + 2 c1(η). For index-0 sections this
    kills η as soon as every free coefficient is negative enough.
    """
    coef = topology.coefficients
    free = [i for i, b in enumerate(topology.boundary) if not b]
    terms = " + ".join(f"({2 * coef[i]})*eta{i + 1}" for i in free) or "0"
    inequality = f"{index} <= 2 + {terms}"
    if any(coef[i] >= 0 for i in free):
        # some η can grow without bound and pay for all the others
        bounds = tuple(0 if b else None for b in topology.boundary)
        return WrappingVerdict(False, bounds, inequality)
    slack = 2 - index
    if slack < 0:
        bounds = tuple(0 for _ in topology.boundary)
        return WrappingVerdict(True, bounds, inequality)
    bounds = tuple(0 if b else slack // (-2 * k) for k, b in zip(coef, topology.boundary))
    return WrappingVerdict(all(x == 0 for x in bounds), bounds, inequality)
