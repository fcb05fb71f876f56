"""The complement Σ₀ of an open annulus around the twist curve, and its mod-2 homology.

Each component of Σ₀ is recorded by its genus h and number of boundary
circles c. Its homology basis is ``pt`` in degree 0 and ``a_1..a_h``,
``b_1..b_h``, ``d_1..d_{c-1}`` in degree 1; the c-th boundary circle is
left out of the basis and equals ``d_1 + ... + d_{c-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidCurveError, ShapeError
from .gf2 import F2LinearMap, GradedF2Space

LEFT, RIGHT = "L", "R"
KINDS = ("pt", "a", "b", "d")


@dataclass(frozen=True)
class SurfaceSpec:
    genus: int
    boundary_count: int

    def __post_init__(self) -> None:
        if self.genus < 0 or self.boundary_count < 0:
            raise ShapeError("genus and boundary count must be nonnegative")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count


@dataclass(frozen=True)
class TwistCurveSpec:
    """``kind`` is "nonseparating" or "separating"; ``split`` = (g1, b1, g2, b2) for the latter."""

    kind: str
    split: tuple[int, int, int, int] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("nonseparating", "separating"):
            raise ShapeError(f"unknown curve kind {self.kind!r}")
        if self.kind == "separating":
            if self.split is None or len(self.split) != 4 or min(self.split) < 0:
                raise ShapeError("separating curve needs a split (g1, b1, g2, b2) of nonnegative ints")
            object.__setattr__(self, "split", tuple(int(x) for x in self.split))
        elif self.split is not None:
            raise ShapeError("a non-separating curve takes no split")

    @classmethod
    def nonseparating(cls) -> "TwistCurveSpec":
        return cls("nonseparating")

    @classmethod
    def separating(cls, g1: int, b1: int, g2: int, b2: int) -> "TwistCurveSpec":
        return cls("separating", (g1, b1, g2, b2))

    @property
    def is_separating(self) -> bool:
        return self.kind == "separating"

    def to_json(self) -> dict:
        return {"kind": self.kind, "split": list(self.split) if self.split else None}


@dataclass(frozen=True)
class Component:
    genus: int
    boundary_count: int
    tags: tuple[tuple[int, str], ...] = ()  # (boundary index, "L" or "R")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count

    @property
    def h1_rank(self) -> int:
        return 2 * self.genus + self.boundary_count - 1


@dataclass(frozen=True)
class ComplementSurface:
    components: tuple[Component, ...]

    def __post_init__(self) -> None:
        tags = [t for comp in self.components for _, t in comp.tags]
        if sorted(tags) != [LEFT, RIGHT]:
            raise ShapeError("need exactly one L and one R boundary tag")
        for comp in self.components:
            if comp.boundary_count < 1:
                raise ShapeError("every component of the complement has boundary")
            for idx, _ in comp.tags:
                if not 1 <= idx <= comp.boundary_count:
                    raise ShapeError(f"boundary index {idx} out of range")

    @property
    def euler_characteristic(self) -> int:
        return sum(c.euler_characteristic for c in self.components)

    def locate(self, tag: str) -> tuple[int, int]:
        """(component, boundary index) of the circle tagged L or R."""
        for k, comp in enumerate(self.components):
            for idx, t in comp.tags:
                if t == tag:
                    return k, idx
        raise KeyError(tag)


@dataclass(frozen=True, order=True)
class SurfaceClass:
    """Basis element of H_*(Σ₀; F2). ``index`` is 0 for pt."""

    component: int
    kind: str
    index: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ShapeError(f"unknown class kind {self.kind!r}")

    @property
    def degree(self) -> int:
        return 0 if self.kind == "pt" else 1

    def __str__(self) -> str:
        name = "pt" if self.kind == "pt" else f"{self.kind}{self.index}"
        return f"{name}@{self.component}"

    def to_json(self) -> dict:
        return {"component": self.component, "kind": self.kind, "index": self.index}


def complement(s: SurfaceSpec, c: TwistCurveSpec) -> ComplementSurface:
    """Cut Σ along γ; L is the circle on the x=0 side, R on the x=1 side."""
    if not c.is_separating:
        if s.genus < 1:
            raise InvalidCurveError("a genus-0 surface has no non-separating curve")
        comp = Component(s.genus - 1, s.boundary_count + 2, ((1, LEFT), (2, RIGHT)))
        return ComplementSurface((comp,))
    g1, b1, g2, b2 = c.split
    if g1 + g2 != s.genus or b1 + b2 != s.boundary_count:
        raise InvalidCurveError(
            f"split {c.split} does not add up to genus {s.genus}, boundary {s.boundary_count}"
        )
    return ComplementSurface(
        (Component(g1, b1 + 1, ((1, LEFT),)), Component(g2, b2 + 1, ((1, RIGHT),)))
    )


def component_classes(k: int, comp: Component) -> list[SurfaceClass]:
    out = [SurfaceClass(k, "pt")]
    out += [SurfaceClass(k, "a", i) for i in range(1, comp.genus + 1)]
    out += [SurfaceClass(k, "b", i) for i in range(1, comp.genus + 1)]
    out += [SurfaceClass(k, "d", j) for j in range(1, comp.boundary_count)]
    return out


def homology(cs: ComplementSurface) -> GradedF2Space:
    labels = [x for k, comp in enumerate(cs.components) for x in component_classes(k, comp)]
    return GradedF2Space.from_labels(labels)


def boundary_class(cs: ComplementSurface, component: int, index: int) -> frozenset[SurfaceClass]:
    """Class of a boundary circle in the d-basis; the last circle is the sum of the others."""
    c = cs.components[component].boundary_count
    if not 1 <= index <= c:
        raise ShapeError(f"boundary index {index} out of range 1..{c}")
    if index < c:
        return frozenset({SurfaceClass(component, "d", index)})
    return frozenset(SurfaceClass(component, "d", j) for j in range(1, c))


def pairing(x: SurfaceClass, y: SurfaceClass) -> int:
    """Mod-2 intersection number of two degree-1 basis classes."""
    if x.degree != 1 or y.degree != 1 or x.component != y.component:
        return 0
    return int({x.kind, y.kind} == {"a", "b"} and x.index == y.index)


def intersection_product(x: SurfaceClass, y: SurfaceClass) -> frozenset[SurfaceClass]:
    """x ∩ y, of degree deg x + deg y - 2. Only H1 x H1 -> H0 can be nonzero."""
    if pairing(x, y):
        return frozenset({SurfaceClass(x.component, "pt")})
    return frozenset()


def diagonal_coproduct(x: SurfaceClass) -> frozenset[tuple[SurfaceClass, SurfaceClass]]:
    pt = SurfaceClass(x.component, "pt")
    if x.kind == "pt":
        return frozenset({(pt, pt)})
    return frozenset({(x, pt), (pt, x)})


def intersection_map(cs: ComplementSurface) -> F2LinearMap:
    H = homology(cs)
    HH = H.tensor(H)
    return F2LinearMap.from_columns(
        HH, H, -2, {(x, y): intersection_product(x, y) for x, y in HH.labels}
    )


def diagonal_map(cs: ComplementSurface) -> F2LinearMap:
    H = homology(cs)
    return F2LinearMap.from_columns(H, H.tensor(H), 0, {x: diagonal_coproduct(x) for x in H.labels})


def expand(classes: Iterable[SurfaceClass]) -> frozenset[SurfaceClass]:
    """Mod-2 sum of a list of basis classes."""
    out: set[SurfaceClass] = set()
    for x in classes:
        out ^= {x}
    return frozenset(out)
