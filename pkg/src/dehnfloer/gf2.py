"""Linear algebra over GF(2) with graded, labelled bases.

Matrices are dense 0/1 numpy arrays. A basis is an ordered tuple of
``(label, degree)`` pairs and the order is never re-sorted, so every matrix
is relative to the stored order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping

import numpy as np

from . import _core
from .errors import DegreeError, ShapeError

MAX_DEGREE = 2


class F2Matrix:
    """Immutable dense matrix over GF(2), stored row-major as uint8."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Any):
        arr = np.array(bits, dtype=np.int64, ndmin=2, copy=True)
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-d array, got shape {arr.shape}")
        arr = (arr & 1).astype(np.uint8)
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self._bits.shape[0]

    @property
    def cols(self) -> int:
        return self._bits.shape[1]

    @property
    def bits(self) -> np.ndarray:
        """Read-only (rows, cols) uint8 view."""
        return self._bits

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        prod = self._bits.astype(np.int64) @ other._bits.astype(np.int64)
        return F2Matrix(prod & 1)

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if self._bits.shape != other._bits.shape:
            raise ShapeError("cannot add matrices of different shapes")
        return F2Matrix(self._bits ^ other._bits)

    def kron(self, other: "F2Matrix") -> "F2Matrix":
        return F2Matrix(np.kron(self._bits, other._bits))

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self._bits.T)

    def is_zero(self) -> bool:
        return not self._bits.any()

    def to_lists(self) -> list[list[int]]:
        return self._bits.astype(int).tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, F2Matrix):
            return NotImplemented
        return self._bits.shape == other._bits.shape and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash((self._bits.shape, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"F2Matrix({self.rows}x{self.cols}, nnz={int(self._bits.sum())})"


def rank(M: F2Matrix) -> int:
    """Rank over GF(2) by Gaussian elimination."""
    if M.rows == 0 or M.cols == 0:
        return 0
    return int(_core.f2_rank(M.bits))


def label_to_json(label: Hashable) -> Any:
    """JSON form of a basis label; tensor labels become ``{"tensor": [...]}``."""
    if isinstance(label, tuple):
        return {"tensor": [label_to_json(x) for x in label]}
    to_json = getattr(label, "to_json", None)
    if to_json is not None:
        return to_json()
    return label


def flatten_label(label: Hashable) -> tuple:
    """Tensor labels with the nesting removed: ((a, b), c) -> (a, b, c)."""
    if isinstance(label, tuple):
        out: tuple = ()
        for part in label:
            out += flatten_label(part)
        return out
    return (label,)


@dataclass(frozen=True)
class GradedF2Space:
    """Ordered graded basis. ``max_degree`` grows additively under tensor."""

    basis: tuple[tuple[Hashable, int], ...]
    max_degree: int = MAX_DEGREE
    _index: Mapping[Hashable, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        basis = tuple((lab, int(deg)) for lab, deg in self.basis)
        object.__setattr__(self, "basis", basis)
        index: dict[Hashable, int] = {}
        for pos, (lab, deg) in enumerate(basis):
            if lab in index:
                raise ShapeError(f"duplicate basis label {lab!r}")
            if not 0 <= deg <= self.max_degree:
                raise DegreeError(f"degree {deg} of {lab!r} outside [0, {self.max_degree}]")
            index[lab] = pos
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_labels(cls, labels: Iterable[Hashable], degree_of=lambda lab: lab.degree) -> "GradedF2Space":
        return cls(tuple((lab, degree_of(lab)) for lab in labels))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> tuple[Hashable, ...]:
        return tuple(lab for lab, _ in self.basis)

    @property
    def degrees(self) -> np.ndarray:
        return np.array([deg for _, deg in self.basis], dtype=np.int64)

    def index(self, label: Hashable) -> int:
        return self._index[label]

    def __contains__(self, label: Hashable) -> bool:
        return label in self._index

    def degree_of(self, label: Hashable) -> int:
        return self.basis[self._index[label]][1]

    def dims_by_degree(self) -> tuple[int, ...]:
        counts = [0] * (self.max_degree + 1)
        for _, deg in self.basis:
            counts[deg] += 1
        return tuple(counts)

    def tensor(self, other: "GradedF2Space") -> "GradedF2Space":
        basis = tuple(((a, b), da + db) for a, da in self.basis for b, db in other.basis)
        return GradedF2Space(basis, self.max_degree + other.max_degree)

    def vector(self, labels: Iterable[Hashable]) -> np.ndarray:
        """0/1 column for a mod-2 sum of basis labels (repeats cancel)."""
        v = np.zeros(self.dim, dtype=np.uint8)
        for lab in labels:
            v[self._index[lab]] ^= 1
        return v

    def to_json(self) -> list[dict]:
        return [{"label": label_to_json(lab), "degree": deg} for lab, deg in self.basis]


@dataclass(frozen=True)
class F2LinearMap:
    """Degree-tagged matrix; column j is the image of ``source.basis[j]``."""

    source: GradedF2Space
    target: GradedF2Space
    degree_shift: int
    matrix: F2Matrix

    def __post_init__(self) -> None:
        if (self.matrix.rows, self.matrix.cols) != (self.target.dim, self.source.dim):
            raise ShapeError(
                f"matrix is {self.matrix.rows}x{self.matrix.cols}, "
                f"basis sizes are {self.target.dim}x{self.source.dim}"
            )
        if self.matrix.rows and self.matrix.cols:
            gap = self.target.degrees[:, None] - self.source.degrees[None, :]
            bad = np.argwhere((self.matrix.bits != 0) & (gap != self.degree_shift))
            if len(bad):
                r, c = bad[0]
                raise DegreeError(
                    f"entry {self.source.labels[c]!r} -> {self.target.labels[r]!r} "
                    f"does not shift degree by {self.degree_shift}"
                )

    @classmethod
    def from_columns(
        cls,
        source: GradedF2Space,
        target: GradedF2Space,
        degree_shift: int,
        images: Mapping[Hashable, Iterable[Hashable]],
    ) -> "F2LinearMap":
        """Build from a dict ``source label -> iterable of target labels`` (mod 2)."""
        bits = np.zeros((target.dim, source.dim), dtype=np.uint8)
        for lab, img in images.items():
            bits[:, source.index(lab)] ^= target.vector(img)
        return cls(source, target, degree_shift, F2Matrix(bits))

    def image(self, label: Hashable) -> tuple[Hashable, ...]:
        col = self.matrix.bits[:, self.source.index(label)]
        return tuple(self.target.labels[i] for i in np.flatnonzero(col))

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "degree_shift": self.degree_shift,
            "matrix": self.matrix.to_lists(),
        }


def compose(f: F2LinearMap, g: F2LinearMap) -> F2LinearMap:
    """f after g."""
    if g.target != f.source:
        raise ShapeError("compose: g.target differs from f.source")
    return F2LinearMap(g.source, f.target, f.degree_shift + g.degree_shift, f.matrix @ g.matrix)


def tensor(A: F2LinearMap, B: F2LinearMap) -> F2LinearMap:
    return F2LinearMap(
        A.source.tensor(B.source),
        A.target.tensor(B.target),
        A.degree_shift + B.degree_shift,
        A.matrix.kron(B.matrix),
    )


def identity_map(space: GradedF2Space) -> F2LinearMap:
    return F2LinearMap(space, space, 0, F2Matrix.identity(space.dim))


def zero_map(source: GradedF2Space, target: GradedF2Space, degree_shift: int = 0) -> F2LinearMap:
    return F2LinearMap(source, target, degree_shift, F2Matrix.zeros(target.dim, source.dim))


def swap_map(A: GradedF2Space, B: GradedF2Space) -> F2LinearMap:
    """The flip A ⊗ B -> B ⊗ A, (a, b) -> (b, a)."""
    src, tgt = A.tensor(B), B.tensor(A)
    return F2LinearMap.from_columns(src, tgt, 0, {(a, b): [(b, a)] for a, b in src.labels})


def restrict_source(f: F2LinearMap, labels: Iterable[Hashable]) -> F2LinearMap:
    """The columns of f for the given source labels, in that order."""
    labels = tuple(labels)
    src = GradedF2Space(tuple((lab, f.source.degree_of(lab)) for lab in labels), f.source.max_degree)
    cols = [f.source.index(lab) for lab in labels]
    return F2LinearMap(src, f.target, f.degree_shift, F2Matrix(f.matrix.bits[:, cols]))
