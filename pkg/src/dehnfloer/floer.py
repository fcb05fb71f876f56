"""HF(φ^m) as H_*(Σ₀) plus one circle's worth of homology per interior twist slice."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from .errors import NotBoundaryLabelError, ShapeError, UnsupportedTopologyError
from .gf2 import F2LinearMap, GradedF2Space
from .indexcalc import check_monotonicity
from .surface import (
    LEFT,
    RIGHT,
    ComplementSurface,
    SurfaceClass,
    SurfaceSpec,
    TwistCurveSpec,
    boundary_class,
    complement,
    homology,
)

ELLIPTIC, HYPERBOLIC = "elliptic", "hyperbolic"


@dataclass(frozen=True, order=True)
class TwistGenerator:
    """e^m_i (elliptic, degree 0) or h^m_i (hyperbolic, degree 1) over x = i/m."""

    kind: str
    slice: int
    power: int

    def __post_init__(self) -> None:
        if self.kind not in (ELLIPTIC, HYPERBOLIC):
            raise ShapeError(f"unknown twist generator kind {self.kind!r}")
        if not 1 <= self.slice <= self.power - 1:
            raise ShapeError(f"slice {self.slice} is not interior for power {self.power}")

    @property
    def degree(self) -> int:
        return 0 if self.kind == ELLIPTIC else 1

    def __str__(self) -> str:
        return f"{'e' if self.kind == ELLIPTIC else 'h'}^{self.power}_{self.slice}"

    def to_json(self) -> dict:
        return {"origin": "twist", "kind": self.kind, "slice": self.slice, "power": self.power}


def label_json(label) -> dict:
    if isinstance(label, SurfaceClass):
        return {"origin": "morse", **label.to_json()}
    return label.to_json()


@dataclass(frozen=True)
class FloerSpace:
    surface: ComplementSurface
    morse_part: GradedF2Space
    twist_part: tuple[TwistGenerator, ...]
    power: int

    @cached_property
    def space(self) -> GradedF2Space:
        return GradedF2Space(
            self.morse_part.basis + tuple((g, g.degree) for g in self.twist_part)
        )

    @property
    def dim(self) -> int:
        return self.space.dim

    def to_json(self) -> dict:
        return {
            "power": self.power,
            "dim": self.dim,
            "basis": [{"label": label_json(lab), "degree": deg} for lab, deg in self.space.basis],
        }


def twist_generators(m: int) -> tuple[TwistGenerator, ...]:
    return tuple(TwistGenerator(kind, i, m) for i in range(1, m) for kind in (ELLIPTIC, HYPERBOLIC))


def floer_space(cs: ComplementSurface, m: int) -> FloerSpace:
    """Assemble HF(φ^m) from an already validated complement."""
    if m < 1:
        raise ShapeError("the power m must be at least 1")
    return FloerSpace(cs, homology(cs), twist_generators(m), m)


def hf_space(s: SurfaceSpec, c: TwistCurveSpec, m: int) -> FloerSpace:
    verdict = check_monotonicity(s, c)
    if not verdict.satisfied:
        raise UnsupportedTopologyError(verdict.reason, verdict.failing_bullet)
    return floer_space(complement(s, c), m)


BoundaryIdentification = Callable[[str, int, int, ComplementSurface], frozenset]


def resolve_boundary_generator(kind: str, slice: int, power: int, cs: ComplementSurface) -> frozenset:
    """Homology class standing in for e/h at slice 0 (the L circle) or m (the R circle).

    Elliptic goes to the point class of the component holding that circle,
    hyperbolic to the circle's own class written in the d-basis.
    """
    if slice == 0:
        tag = LEFT
    elif slice == power:
        tag = RIGHT
    else:
        raise NotBoundaryLabelError(f"slice {slice} is interior for power {power}")
    component, index = cs.locate(tag)
    if kind == ELLIPTIC:
        return frozenset({SurfaceClass(component, "pt")})
    if kind == HYPERBOLIC:
        return boundary_class(cs, component, index)
    raise ShapeError(f"unknown twist generator kind {kind!r}")


def twist_term(
    kind: str,
    slice: int,
    power: int,
    cs: ComplementSurface,
    identification: BoundaryIdentification = resolve_boundary_generator,
) -> frozenset:
    """e^power_slice or h^power_slice as a set of HF(φ^power) basis labels."""
    if 1 <= slice <= power - 1:
        return frozenset({TwistGenerator(kind, slice, power)})
    return identification(kind, slice, power, cs)


def proj(fs: FloerSpace) -> F2LinearMap:
    images = {lab: ([lab] if isinstance(lab, SurfaceClass) else []) for lab in fs.space.labels}
    return F2LinearMap.from_columns(fs.space, fs.morse_part, 0, images)


def iota(fs: FloerSpace) -> F2LinearMap:
    return F2LinearMap.from_columns(fs.morse_part, fs.space, 0, {lab: [lab] for lab in fs.morse_part.labels})
