"""Exact counting over point sets: histograms, quadruples, paths, triangles, incidences."""
from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import BudgetExceeded, CounterOverflow, DimensionMismatch, SetsNotDisjoint
from ..geometry import BilinearForm, PointSet, Subspace2, bilinear_eval
from ..rng import XorShift64Star
from . import backend
from .tensor import DENSE_LIMIT, INT64_MAX, SpectrumTensor, WeightFunction

DEFAULT_TABLE_BUDGET = 1 << 31
ORACLE_BUDGET = 10 ** 6
EXHAUSTIVE_SEARCH_LIMIT = 10 ** 8
# direct character-sum route evaluates q * m**2 terms, m = |E||F|
DIRECT_CHARSUM_BUDGET = 5 * 10 ** 7


def _check_dims(form: BilinearForm, *sets: PointSet) -> None:
    for s in sets:
        if s.dim != form.dim:
            raise DimensionMismatch(f"set {s.label!r} has dimension {s.dim}, form has {form.dim}")
        if s.q != form.field.q:
            raise DimensionMismatch(f"set {s.label!r} lives over F_{s.q}, form over F_{form.field.q}")


def _check_fits(count: int, what: str) -> None:
    if count > INT64_MAX:
        raise CounterOverflow(f"{what} ({count}) exceeds the 64-bit counter range")


def dot_table(e: PointSet, f: PointSet, form: BilinearForm,
              budget: int = DEFAULT_TABLE_BUDGET) -> np.ndarray:
    """``table[i, j] = B(e[i], f[j])`` as a C-contiguous int64 array."""
    _check_dims(form, e, f)
    if len(e) * len(f) > budget:
        raise BudgetExceeded(f"dot table {len(e)}x{len(f)} exceeds budget of {budget} entries")
    q = form.field.q
    right = (form.matrix @ f.coords.T) % q
    return np.ascontiguousarray((e.coords @ right) % q, dtype=np.int64)


def pair_histogram(e: PointSet, f: PointSet, form: BilinearForm) -> np.ndarray:
    """``N[l] = #{(x, y) in E x F : B(x, y) = l}`` for every ``l`` in F_q."""
    _check_fits(len(e) * len(f), "pair count")
    table = dot_table(e, f, form)
    return backend.kernels().pair_histogram(table, form.field.q)


def quadruple_count(e: PointSet, f: PointSet, form: BilinearForm) -> int:
    """Number of ``(x1, x2, y1, y2)`` in ``E^2 x F^2`` with ``B(x1, y1) = B(x2, y2)``."""
    return sum(n * n for n in pair_histogram(e, f, form).tolist())


def quadruple_bruteforce(e: PointSet, f: PointSet, form: BilinearForm) -> int:
    """Oracle for :func:`quadruple_count` by direct enumeration of all quadruples."""
    if (len(e) * len(f)) ** 2 > ORACLE_BUDGET * 10:
        raise BudgetExceeded("quadruple oracle instance too large")
    pairs = [bilinear_eval(form, x, y) for x in e for y in f]
    return sum(1 for a in pairs for b in pairs if a == b)


def _char_sum_over_t(q: int, delta: np.ndarray) -> np.ndarray:
    table = np.exp(2j * np.pi * np.arange(q) / q)
    total = np.zeros(delta.shape, dtype=np.complex128)
    for t in range(q):
        total += table[(t * delta) % q]
    return total


def charsum_quadruple(e: PointSet, f: PointSet, form: BilinearForm,
                      method: str = "auto") -> complex:
    """Sum of ``chi(t (B(x1,y1) - B(x2,y2)))`` over ``x1, x2 in E``, ``y1, y2 in F``, ``t in F_q``.

    ``method="direct"`` evaluates every term; ``"histogram"`` groups pairs by
    their dot product first.  ``"auto"`` picks direct when it fits the budget.
    """
    q = form.field.q
    m = len(e) * len(f)
    if method == "auto":
        method = "direct" if q * m * m <= DIRECT_CHARSUM_BUDGET else "histogram"
    if method == "direct":
        if q * m * m > DIRECT_CHARSUM_BUDGET:
            raise BudgetExceeded(f"direct character sum needs {q * m * m} terms")
        vals = dot_table(e, f, form).ravel()
        delta = (vals[:, None] - vals[None, :]) % q
        return complex(_char_sum_over_t(q, delta).sum())
    if method == "histogram":
        hist = pair_histogram(e, f, form).astype(np.float64)
        lam = np.arange(q)
        kernel = _char_sum_over_t(q, (lam[:, None] - lam[None, :]) % q)
        return complex(hist @ kernel @ hist)
    raise ValueError(f"unknown method {method!r}")


def path_count(e: PointSet, lam: int, beta: int, form: BilinearForm) -> int:
    """Number of ``(x, y, z)`` in ``E^3`` with ``B(x, y) = lam`` and ``B(x, z) = beta``."""
    q = form.field.q
    _check_fits(len(e) ** 3, "path count")
    counts = backend.kernels().row_value_counts(dot_table(e, e, form), q)
    return int(np.dot(counts[:, lam % q], counts[:, beta % q]))


def path_bruteforce(e: PointSet, lam: int, beta: int, form: BilinearForm) -> int:
    pts = list(e)
    q = form.field.q
    lam, beta = lam % q, beta % q
    total = 0
    for x in pts:
        for y in pts:
            if bilinear_eval(form, x, y) != lam:
                continue
            total += sum(1 for z in pts if bilinear_eval(form, x, z) == beta)
    return total


def _chunks(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n)) if n else 1
    base, extra = divmod(n, parts)
    out, lo = [], 0
    for i in range(parts):
        hi = lo + base + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def spectrum(e1: PointSet, e2: PointSet, e3: PointSet, form: BilinearForm,
             threads: int | None = None, allow_overlap: bool = False,
             dense: bool | None = None, kernel: str | None = None) -> SpectrumTensor:
    """Triangle spectrum ``f[l1, l2, l3] = #{x in E1, y in E2, z in E3 :
    B(x,y)=l1, B(y,z)=l2, B(z,x)=l3}``.

    The outer index runs over ``E2``; each ``(y, z)`` pair fixes ``l2`` and
    the inner loop over ``x`` fills the ``(l1, l3)`` slice.  Workers own
    contiguous blocks of ``y`` and private tensors, merged in block order.
    """
    _check_dims(form, e1, e2, e3)
    if not allow_overlap:
        for a, b in ((e1, e2), (e2, e3), (e1, e3)):
            if not a.isdisjoint(b):
                raise SetsNotDisjoint(f"{a.label!r} and {b.label!r} share points")
    q = form.field.q
    _check_fits(len(e1) * len(e2) * len(e3), "triangle count")
    if dense is None:
        dense = q ** 3 <= DENSE_LIMIT
    threads = threads or backend.default_threads()
    labels = (e1.label, e2.label, e3.label)

    at = np.ascontiguousarray(dot_table(e1, e2, form).T)
    byz = dot_table(e2, e3, form)
    czx = dot_table(e3, e1, form)
    blocks = _chunks(len(e2), threads)

    if not dense:
        return _spectrum_sparse(at, byz, czx, q, blocks, threads, labels, form.name)

    impl = backend.kernels(kernel)
    size = q ** 3

    def work(block):
        buf = np.zeros(size, dtype=np.int64)
        impl.spectrum_dense(at, byz, czx, q, block[0], block[1], buf)
        return buf

    if threads == 1 or len(blocks) == 1:
        partials = [work(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(work, blocks))
    total = partials[0]
    for buf in partials[1:]:
        total += buf
    total.setflags(write=False)
    return SpectrumTensor(q, dense=total, labels=labels, form=form.name)


def _spectrum_sparse(at, byz, czx, q, blocks, threads, labels, form_name):
    qq = q * q

    def work(block):
        keys_acc = np.empty(0, dtype=np.int64)
        cnt_acc = np.empty(0, dtype=np.int64)
        for y in range(*block):
            keys = (at[y][None, :] * qq + byz[y][:, None] * q + czx).ravel()
            k, c = np.unique(keys, return_counts=True)
            keys_acc, cnt_acc = _merge_sparse(keys_acc, cnt_acc, k, c.astype(np.int64))
        return keys_acc, cnt_acc

    if threads == 1 or len(blocks) == 1:
        partials = [work(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(work, blocks))
    keys, counts = partials[0]
    for k, c in partials[1:]:
        keys, counts = _merge_sparse(keys, counts, k, c)
    keys.setflags(write=False)
    counts.setflags(write=False)
    return SpectrumTensor(q, keys=keys, counts=counts, labels=labels, form=form_name)


def _merge_sparse(k1, c1, k2, c2):
    keys = np.concatenate([k1, k2])
    counts = np.concatenate([c1, c2])
    uniq, inverse = np.unique(keys, return_inverse=True)
    merged = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(merged, inverse, counts)
    return uniq, merged


def spectrum_bruteforce(e1: PointSet, e2: PointSet, e3: PointSet,
                        form: BilinearForm) -> Counter:
    """Oracle: triple loop with scalar form evaluation, returns a Counter of triples."""
    if len(e1) * len(e2) * len(e3) > ORACLE_BUDGET:
        raise BudgetExceeded("spectrum oracle instance too large")
    out: Counter = Counter()
    p1, p2, p3 = list(e1), list(e2), list(e3)
    for x in p1:
        for y in p2:
            l1 = bilinear_eval(form, x, y)
            for z in p3:
                out[(l1, bilinear_eval(form, y, z), bilinear_eval(form, z, x))] += 1
    return out


def six_tuple_bruteforce(e1: PointSet, e2: PointSet, e3: PointSet, form: BilinearForm,
                         method: str = "group") -> int:
    """Count ``(x,y,z,x',y',z')`` whose two triangles have equal dot-product triples.

    ``method="group"`` enumerates triangles and sums squared multiplicities;
    ``method="pairs"`` compares every pair of triangles (tiny inputs only).
    """
    m = len(e1) * len(e2) * len(e3)
    if m > ORACLE_BUDGET:
        raise BudgetExceeded(f"{m} triangles exceeds the oracle budget of {ORACLE_BUDGET}")
    p1, p2, p3 = list(e1), list(e2), list(e3)
    triples = [
        (bilinear_eval(form, x, y), bilinear_eval(form, y, z), bilinear_eval(form, z, x))
        for x in p1 for y in p2 for z in p3
    ]
    if method == "group":
        return sum(c * c for c in Counter(triples).values())
    if method == "pairs":
        if m * m > 10 ** 7:
            raise BudgetExceeded("pairwise six-tuple oracle limited to 10**7 comparisons")
        return sum(1 for a in triples for b in triples if a == b)
    raise ValueError(f"unknown method {method!r}")


def zero_degree_function(e: PointSet, form: BilinearForm) -> WeightFunction:
    """``g(z) = #{x in E : B(x, z) = 0}`` for ``z`` in ``E``."""
    table = dot_table(e, e, form)
    return WeightFunction(e, np.count_nonzero(table == 0, axis=0))


def weighted_quadruple(g: WeightFunction, h: WeightFunction, form: BilinearForm) -> int:
    """``sum g(x1) g(x2) h(y1) h(y2)`` over quadruples with ``B(x1, y1) = B(x2, y2)``."""
    q = form.field.q
    _check_fits(g.l1 * h.l1, "weighted pair mass")
    table = dot_table(g.support, h.support, form)
    outer = g.weights[:, None] * h.weights[None, :]
    sums = [0] * q
    for lam in range(q):
        sums[lam] = int(outer[table == lam].sum())
    return sum(s * s for s in sums)


def weighted_quadruple_bruteforce(g: WeightFunction, h: WeightFunction,
                                  form: BilinearForm) -> int:
    gx = [(p, w) for p, w in zip(g.support, g.weights.tolist()) if w]
    hy = [(p, w) for p, w in zip(h.support, h.weights.tolist()) if w]
    total = 0
    for (x1, a1), (x2, a2) in itertools.product(gx, repeat=2):
        for (y1, b1), (y2, b2) in itertools.product(hy, repeat=2):
            if bilinear_eval(form, x1, y1) == bilinear_eval(form, x2, y2):
                total += a1 * a2 * b1 * b2
    return total


@dataclass(frozen=True)
class Pruned:
    points: PointSet
    kept_fraction: float
    threshold: Fraction


def prune_heavy_zero(e: PointSet, c, form: BilinearForm) -> Pruned:
    """Keep ``x`` whose zero-degree ``#{y in E : B(x, y) = 0}`` is at most ``c |E| / q``."""
    c = Fraction(c)
    if c <= 0:
        raise ValueError("C must be positive")
    q = form.field.q
    threshold = c * len(e) / q
    if len(e) == 0:
        return Pruned(e, 1.0, threshold)
    degrees = np.count_nonzero(dot_table(e, e, form) == 0, axis=1)
    # deg <= c|E|/q  <=>  deg * q * den <= num * |E|
    keep = degrees * q * c.denominator <= c.numerator * len(e)
    kept = e.subset(keep, f"{e.label}[pruned C={c}]")
    return Pruned(kept, len(kept) / len(e), threshold)


def incidence_count(subspaces: Sequence[Subspace2], e: PointSet) -> int:
    """Number of (plane, point) pairs with the point on the plane."""
    if e.dim != 3:
        raise DimensionMismatch("incidences are defined for points of F_q^3")
    if not subspaces or len(e) == 0:
        return 0
    q = e.q
    normals = np.array([s.normal for s in subspaces], dtype=np.int64)
    return int(np.count_nonzero((e.coords @ normals.T) % q == 0))


@dataclass(frozen=True)
class IndependenceResult:
    triple: tuple | None
    exhaustive: bool
    checked: int

    @property
    def found(self) -> bool:
        return self.triple is not None


def independence_search(e1: PointSet, e2: PointSet, e3: PointSet,
                        exhaustive_limit: int = EXHAUSTIVE_SEARCH_LIMIT,
                        samples: int = 10 ** 6, seed: int = 0) -> IndependenceResult:
    """Find a linearly dependent ``(x, y, z)`` in ``E1 x E2 x E3``.

    Exhaustive searches return the first hit in lexicographic order of the
    sorted sets.  Above ``exhaustive_limit`` triples, ``samples`` random
    triples are tested and a negative answer is not a certificate.
    """
    for s in (e1, e2, e3):
        if s.dim != 3:
            raise DimensionMismatch("independence search is defined in F_q^3")
    q = e1.q
    total = len(e1) * len(e2) * len(e3)
    if total == 0:
        return IndependenceResult(None, True, 0)
    if total <= exhaustive_limit:
        i, j, k = backend.kernels().first_dependent(e1.coords, e2.coords, e3.coords, q)
        if i < 0:
            return IndependenceResult(None, True, total)
        checked = (i * len(e2) + j) * len(e3) + k + 1
        return IndependenceResult((e1.points[i], e2.points[j], e3.points[k]), True, checked)

    rng = XorShift64Star(seed)
    x, y, z = e1.coords, e2.coords, e3.coords
    for n in range(1, samples + 1):
        a, b, c = x[rng.below(len(x))], y[rng.below(len(y))], z[rng.below(len(z))]
        det = (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
               + a[2] * (b[0] * c[1] - b[1] * c[0])) % q
        if det == 0:
            return IndependenceResult((tuple(map(int, a)), tuple(map(int, b)),
                                       tuple(map(int, c))), False, n)
    return IndependenceResult(None, False, samples)
