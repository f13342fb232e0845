"""Points, point sets and bilinear forms over F_q, plus direction classes.

A direction is a line through the origin, represented by the scalar multiple
of a nonzero point whose first nonzero coordinate is 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._io import atomic_write_text
from .errors import (
    DegenerateForm,
    DimensionMismatch,
    PointSetFormatError,
    TooFewDirections,
    ZeroVector,
)
from .field import Field

Point = tuple[int, ...]


def _lexsorted(coords: np.ndarray) -> np.ndarray:
    if len(coords) == 0:
        return coords
    order = np.lexsort(coords.T[::-1])
    return coords[order]


@dataclass(frozen=True, eq=False)
class PointSet:
    """Immutable, duplicate-free set of points in F_q^d, sorted lexicographically."""

    field: Field
    dim: int
    coords: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, self.dim)
        if arr.ndim != 2 or arr.shape[1] != self.dim:
            raise DimensionMismatch(f"expected points of length {self.dim}, got shape {arr.shape}")
        if self.dim < 2:
            raise DimensionMismatch("ambient dimension must be at least 2")
        q = self.field.q
        if arr.size and (arr.min() < 0 or arr.max() >= q):
            raise ValueError(f"coordinates must be canonical residues in [0, {q - 1}]")
        arr = _lexsorted(arr)
        if len(arr) > 1 and np.any(np.all(arr[1:] == arr[:-1], axis=1)):
            raise ValueError("duplicate points in PointSet")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @classmethod
    def from_points(cls, field: Field, points: Iterable[Sequence[int]], dim: int | None = None,
                    label: str = "", dedupe: bool = False) -> "PointSet":
        pts = [tuple(int(c) % field.q for c in p) for p in points]
        if dim is None:
            if not pts:
                raise DimensionMismatch("cannot infer dimension of an empty point list")
            dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise DimensionMismatch("points of differing length")
        if dedupe:
            pts = sorted(set(pts))
        return cls(field, dim, np.array(pts, dtype=np.int64).reshape(len(pts), dim), label)

    @classmethod
    def full_space(cls, field: Field, dim: int, label: str = "") -> "PointSet":
        grid = np.array(list(itertools.product(range(field.q), repeat=dim)), dtype=np.int64)
        return cls(field, dim, grid, label or f"full_space(q={field.q},d={dim})")

    @classmethod
    def nonzero_space(cls, field: Field, dim: int, label: str = "") -> "PointSet":
        full = cls.full_space(field, dim)
        return cls(field, dim, full.coords[1:], label or f"nonzero_space(q={field.q},d={dim})")

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return (tuple(int(c) for c in row) for row in self.coords)

    def __contains__(self, point) -> bool:
        p = np.asarray(point, dtype=np.int64) % self.q
        return bool(np.any(np.all(self.coords == p, axis=1)))

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return (self.field == other.field and self.dim == other.dim
                and np.array_equal(self.coords, other.coords))

    def __hash__(self):
        return hash((self.field.q, self.dim, self.coords.tobytes()))

    def __repr__(self):
        return f"PointSet(q={self.q}, d={self.dim}, n={len(self)}, label={self.label!r})"

    @property
    def points(self) -> list[Point]:
        return list(self)

    def subset(self, mask, label: str = "") -> "PointSet":
        return PointSet(self.field, self.dim, self.coords[np.asarray(mask)], label or self.label)

    def transformed(self, matrix, label: str = "") -> "PointSet":
        """Image of the set under the linear map ``x -> M x`` (M must be invertible)."""
        m = np.asarray(matrix, dtype=np.int64) % self.q
        return PointSet(self.field, self.dim, (self.coords @ m.T) % self.q, label or self.label)

    def without_origin(self) -> "PointSet":
        return self.subset(np.any(self.coords != 0, axis=1))

    def isdisjoint(self, other: "PointSet") -> bool:
        a = {row.tobytes() for row in self.coords}
        return not any(row.tobytes() in a for row in other.coords)


def det_mod(matrix, q: int) -> int:
    """Determinant over F_q by Gaussian elimination."""
    m = [[int(v) % q for v in row] for row in np.asarray(matrix)]
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionMismatch("determinant of a non-square matrix")
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col] % q
        inv = pow(m[col][col], -1, q)
        for r in range(col + 1, n):
            factor = m[r][col] * inv % q
            if factor:
                m[r] = [(a - factor * b) % q for a, b in zip(m[r], m[col])]
    return det % q


def is_nondegenerate(matrix, q: int) -> bool:
    return det_mod(matrix, q) != 0


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """Non-degenerate form ``B(x, y) = x^T M y`` over F_q."""

    field: Field
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64) % self.field.q
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"form matrix must be square, got shape {m.shape}")
        if not is_nondegenerate(m, self.field.q):
            raise DegenerateForm("form matrix is singular over F_q")
        m = np.ascontiguousarray(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if not self.name:
            object.__setattr__(self, "name", "dot" if self.is_identity else _matrix_str(m))

    @classmethod
    def identity(cls, field: Field, dim: int) -> "BilinearForm":
        return cls(field, np.eye(dim, dtype=np.int64), "dot")

    @classmethod
    def parse(cls, field: Field, text: str) -> "BilinearForm":
        """Parse ``"a,b;c,d"`` (rows separated by ``;``)."""
        try:
            rows = [[int(v) for v in row.split(",")] for row in text.strip().split(";")]
        except ValueError as exc:
            raise ValueError(f"cannot parse form matrix {text!r}") from exc
        return cls(field, np.array(rows, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(self.dim, dtype=np.int64)))

    @property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.matrix, self.matrix.T))

    def __call__(self, x, y) -> int:
        return bilinear_eval(self, x, y)

    def __eq__(self, other):
        if not isinstance(other, BilinearForm):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.field.q, self.matrix.tobytes()))


def _matrix_str(m: np.ndarray) -> str:
    return ";".join(",".join(str(int(v)) for v in row) for row in m)


def bilinear_eval(form: BilinearForm, x, y) -> int:
    x = [int(v) for v in x]
    y = [int(v) for v in y]
    d = form.dim
    if len(x) != d or len(y) != d:
        raise DimensionMismatch(f"form has dimension {d}, got points of length {len(x)} and {len(y)}")
    m = form.matrix
    total = 0
    for i in range(d):
        if x[i]:
            total += x[i] * sum(int(m[i, j]) * y[j] for j in range(d))
    return total % form.field.q


def direction_of(x, q: int) -> Point:
    x = [int(v) % q for v in x]
    lead = next((v for v in x if v), 0)
    if lead == 0:
        raise ZeroVector("the origin has no direction")
    inv = pow(lead, -1, q)
    return tuple(v * inv % q for v in x)


def directions_of(coords: np.ndarray, q: int) -> np.ndarray:
    """Vectorised :func:`direction_of` for an array of nonzero points."""
    coords = np.asarray(coords, dtype=np.int64)
    nonzero = coords != 0
    if not np.all(nonzero.any(axis=1)):
        raise ZeroVector("the origin has no direction")
    lead = coords[np.arange(len(coords)), nonzero.argmax(axis=1)]
    inverses = np.array([0] + [pow(a, -1, q) for a in range(1, q)], dtype=np.int64)
    return (coords * inverses[lead][:, None]) % q


@dataclass(frozen=True)
class DirectionPartition:
    parts: tuple[PointSet, PointSet, PointSet]
    direction_map: dict = dc_field(repr=False)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(len(p) for p in self.parts)


def direction_classes(points: PointSet) -> dict[Point, np.ndarray]:
    """Map each direction to the (sorted) rows of ``points`` lying on it; origin skipped."""
    nz = points.without_origin().coords
    if len(nz) == 0:
        return {}
    dirs = directions_of(nz, points.q)
    classes: dict[Point, list[int]] = {}
    for i, row in enumerate(dirs):
        classes.setdefault(tuple(int(v) for v in row), []).append(i)
    return {k: nz[idx] for k, idx in classes.items()}


def partition_by_directions(points: PointSet) -> DirectionPartition:
    """Split ``points`` (minus the origin) into three parts with disjoint direction support.

    Classes are taken largest first, ties broken by the canonical
    representative, and each is given to the currently smallest part
    (lowest index on ties).
    """
    classes = direction_classes(points)
    if len(classes) < 3:
        raise TooFewDirections(f"need at least 3 direction classes, found {len(classes)}")
    order = sorted(classes, key=lambda k: (-len(classes[k]), k))
    buckets: list[list[np.ndarray]] = [[], [], []]
    sizes = [0, 0, 0]
    direction_map = {}
    for k in order:
        i = min(range(3), key=lambda j: (sizes[j], j))
        buckets[i].append(classes[k])
        sizes[i] += len(classes[k])
        direction_map[k] = i
    parts = tuple(
        PointSet(points.field, points.dim,
                 np.concatenate(b).reshape(-1, points.dim),
                 f"{points.label}[part {i}]")
        for i, b in enumerate(buckets)
    )
    return DirectionPartition(parts, direction_map)


def line_set(x, lam: int, points: PointSet, form: BilinearForm) -> PointSet:
    """All ``y`` in ``points`` with ``B(x, y) = lam``."""
    x = np.asarray(x, dtype=np.int64) % points.q
    if len(x) != points.dim or form.dim != points.dim:
        raise DimensionMismatch("point, set and form dimensions differ")
    if not x.any():
        raise ZeroVector("line_set is undefined at the origin")
    row = (x @ form.matrix) % points.q
    mask = (points.coords @ row) % points.q == lam % points.q
    return points.subset(mask)


@dataclass(frozen=True)
class Subspace2:
    """A plane through the origin of F_q^3, spanned by two rows in reduced echelon form."""

    q: int
    basis: tuple[Point, Point]

    @property
    def normal(self) -> Point:
        (a1, a2, a3), (b1, b2, b3) = self.basis
        q = self.q
        return ((a2 * b3 - a3 * b2) % q, (a3 * b1 - a1 * b3) % q, (a1 * b2 - a2 * b1) % q)

    def __contains__(self, x) -> bool:
        n = self.normal
        return sum(int(a) * int(b) for a, b in zip(n, x)) % self.q == 0


def enumerate_2subspaces(q: int) -> list[Subspace2]:
    """Every 2-dimensional subspace of F_q^3, once each, ordered by pivot pattern then entries."""
    out = []
    for a in range(q):
        for b in range(q):
            out.append(Subspace2(q, ((1, 0, a), (0, 1, b))))
    for a in range(q):
        out.append(Subspace2(q, ((1, a, 0), (0, 0, 1))))
    out.append(Subspace2(q, ((0, 1, 0), (0, 0, 1))))
    return out


def read_pointset(path, label: str | None = None) -> PointSet:
    """Read the text format: header ``q=<int> d=<int>`` then one point per line."""
    path = Path(path)
    lines = [ln.strip() for ln in path.read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise PointSetFormatError(f"{path}: empty file")
    header = dict(tok.split("=", 1) for tok in lines[0].split() if "=" in tok)
    try:
        q, d = int(header["q"]), int(header["d"])
    except (KeyError, ValueError) as exc:
        raise PointSetFormatError(f"{path}: bad header {lines[0]!r}") from exc
    fld = Field(q)
    seen = set()
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        try:
            p = tuple(int(v) for v in ln.split(","))
        except ValueError as exc:
            raise PointSetFormatError(f"{path}:{lineno}: not a point: {ln!r}") from exc
        if len(p) != d or any(not 0 <= v < q for v in p):
            raise PointSetFormatError(f"{path}:{lineno}: point {p} not in F_{q}^{d}")
        if p in seen:
            raise PointSetFormatError(f"{path}:{lineno}: duplicate point {p}")
        seen.add(p)
        rows.append(p)
    return PointSet(fld, d, np.array(rows, dtype=np.int64).reshape(len(rows), d),
                    label if label is not None else path.stem)


def format_pointset(points: PointSet) -> str:
    body = "".join(",".join(str(int(v)) for v in row) + "\n" for row in points.coords)
    return f"q={points.q} d={points.dim}\n" + body


def write_pointset(points: PointSet, path) -> None:
    atomic_write_text(Path(path), format_pointset(points))
