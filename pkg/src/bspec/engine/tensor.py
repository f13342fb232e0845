"""Result containers: the triangle spectrum tensor and integer weight functions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import PointSet

INT64_MAX = np.iinfo(np.int64).max
DENSE_LIMIT = 1 << 24


@dataclass(frozen=True, eq=False)
class SpectrumTensor:
    """Counts ``f[l1, l2, l3]`` of triangles with dot-product triple ``(l1, l2, l3)``.

    Dense storage holds a flat ``q**3`` int64 array; sparse storage holds
    sorted flat keys ``l1*q*q + l2*q + l3`` with their (positive) counts.
    """

    q: int
    dense: np.ndarray | None = None
    keys: np.ndarray | None = None
    counts: np.ndarray | None = None
    labels: tuple[str, str, str] = ("", "", "")
    form: str = "dot"

    @property
    def is_dense(self) -> bool:
        return self.dense is not None

    def _flat(self, l1, l2, l3) -> int:
        q = self.q
        return (l1 % q) * q * q + (l2 % q) * q + (l3 % q)

    def __getitem__(self, idx) -> int:
        k = self._flat(*idx)
        if self.is_dense:
            return int(self.dense[k])
        pos = np.searchsorted(self.keys, k)
        if pos < len(self.keys) and self.keys[pos] == k:
            return int(self.counts[pos])
        return 0

    def items(self):
        """Yield ``((l1, l2, l3), count)`` for every nonzero entry in key order."""
        if self.is_dense:
            keys = np.flatnonzero(self.dense)
            vals = self.dense[keys]
        else:
            keys, vals = self.keys, self.counts
        q = self.q
        for k, v in zip(keys.tolist(), vals.tolist()):
            l1, rest = divmod(k, q * q)
            l2, l3 = divmod(rest, q)
            yield (l1, l2, l3), v

    def to_array(self) -> np.ndarray:
        """Dense ``(q, q, q)`` view; only sensible for small q."""
        if self.is_dense:
            return self.dense.reshape(self.q, self.q, self.q)
        arr = np.zeros(self.q ** 3, dtype=np.int64)
        arr[self.keys] = self.counts
        return arr.reshape(self.q, self.q, self.q)

    def _values(self) -> np.ndarray:
        return self.dense if self.is_dense else self.counts

    @property
    def mass(self) -> int:
        return int(self._values().sum())

    @property
    def support(self) -> int:
        return int(np.count_nonzero(self._values()))

    @property
    def l2(self) -> int:
        vals = self._values()
        if vals.size == 0:
            return 0
        top = int(vals.max())
        if top == 0:
            return 0
        if top * self.mass <= INT64_MAX:
            # sum of squares <= max * mass, so int64 cannot wrap
            return int(np.dot(vals, vals))
        nz = vals[vals != 0].tolist()
        return sum(v * v for v in nz)

    def stats(self) -> tuple[int, int, int]:
        return self.mass, self.l2, self.support

    def __eq__(self, other):
        if not isinstance(other, SpectrumTensor):
            return NotImplemented
        if self.q != other.q:
            return False
        if self.is_dense and other.is_dense:
            return bool(np.array_equal(self.dense, other.dense))
        return list(self.items()) == list(other.items())

    __hash__ = None


def tensor_stats(f: SpectrumTensor) -> tuple[int, int, int]:
    """``(mass, l2, support)`` as exact Python ints."""
    return f.stats()


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Nonnegative integer weights on the points of ``support``; zero elsewhere."""

    support: PointSet
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.int64)
        if w.shape != (len(self.support),):
            raise ValueError("one weight per support point required")
        if w.size and w.min() < 0:
            raise ValueError("weights must be nonnegative")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def indicator(cls, points: PointSet, scale: int = 1) -> "WeightFunction":
        return cls(points, np.full(len(points), scale, dtype=np.int64))

    def __getitem__(self, point) -> int:
        p = np.asarray(point, dtype=np.int64) % self.support.q
        hit = np.flatnonzero(np.all(self.support.coords == p, axis=1))
        return int(self.weights[hit[0]]) if hit.size else 0

    @property
    def l1(self) -> int:
        return sum(self.weights.tolist())

    @property
    def l2_squared(self) -> int:
        return sum(v * v for v in self.weights.tolist())
