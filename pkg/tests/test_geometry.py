import itertools

import numpy as np
import pytest

from bspec import (
    BilinearForm,
    Field,
    PointSet,
    bilinear_eval,
    direction_of,
    enumerate_2subspaces,
    is_nondegenerate,
    line_set,
    partition_by_directions,
    read_pointset,
    write_pointset,
)
from bspec.errors import (
    DegenerateForm,
    DimensionMismatch,
    PointSetFormatError,
    TooFewDirections,
    ZeroVector,
)
from bspec.geometry import det_mod, format_pointset

from conftest import random_set


def test_bilinear_eval_examples(f3, f5):
    dot5 = BilinearForm.identity(f5, 2)
    assert bilinear_eval(dot5, (1, 2), (3, 4)) == 1
    for y in itertools.product(range(5), repeat=2):
        assert dot5((0, 0), y) == 0
    swap = BilinearForm(f3, [[0, 1], [1, 0]])
    assert swap((1, 0), (1, 0)) == 0
    assert swap((1, 0), (0, 2)) == 2
    with pytest.raises(DimensionMismatch):
        dot5((1, 2, 3), (1, 2))


def test_nondegeneracy_examples():
    assert is_nondegenerate(np.eye(3, dtype=int), 7)
    assert not is_nondegenerate([[1, 2], [2, 1]], 3)
    assert is_nondegenerate([[0, 1], [4, 0]], 5)
    with pytest.raises(DegenerateForm):
        BilinearForm(Field(3), [[1, 2], [2, 1]])


def test_det_mod_against_integer_determinant():
    rng = np.random.default_rng(5)
    for _ in range(50):
        m = rng.integers(0, 7, size=(3, 3))
        assert det_mod(m, 7) == round(np.linalg.det(m)) % 7


def test_form_parse_roundtrip(f5):
    form = BilinearForm.parse(f5, "0,1;4,0")
    assert form.name == "0,1;4,0"
    assert BilinearForm.parse(f5, form.name) == form
    assert not form.is_symmetric


def test_direction_examples():
    assert direction_of((0, 2), 5) == (0, 1)
    assert direction_of((2, 3), 5) == (1, 4)
    assert direction_of((1, 0, 2), 3) == (1, 0, 2)
    with pytest.raises(ZeroVector):
        direction_of((0, 0), 5)


@pytest.mark.parametrize("q,d", [(q, d) for q in (2, 3, 5, 7) for d in (2, 3)])
def test_direction_scale_invariance_exhaustive(q, d):
    for x in itertools.product(range(q), repeat=d):
        if not any(x):
            continue
        base = direction_of(x, q)
        assert base[next(i for i, v in enumerate(base) if v)] == 1
        for c in range(1, q):
            assert direction_of([c * v for v in x], q) == base


def test_partition_example_q3_plane(f3):
    part = partition_by_directions(PointSet.nonzero_space(f3, 2))
    assert part.sizes == (4, 2, 2)
    # largest-first, ties by representative: (0,1) (1,0) (1,1) (1,2); the fourth lands on part 0
    assert part.direction_map == {(0, 1): 0, (1, 0): 1, (1, 1): 2, (1, 2): 0}


def test_partition_three_singletons(f5):
    pts = PointSet.from_points(f5, [(1, 0), (0, 1), (1, 1)])
    assert partition_by_directions(pts).sizes == (1, 1, 1)


def test_partition_too_few_directions(f5):
    pts = PointSet.from_points(f5, [(1, 0), (2, 0), (0, 3), (0, 0)])
    with pytest.raises(TooFewDirections):
        partition_by_directions(pts)


@pytest.mark.parametrize("seed", range(10))
def test_partition_invariants(seed):
    pts = random_set(7, 2, 20, seed)
    part = partition_by_directions(pts)
    seen = set()
    for i, p in enumerate(part.parts):
        for x in p:
            assert x not in seen
            seen.add(x)
            assert part.direction_map[direction_of(x, 7)] == i
    assert seen == set(pts.without_origin())
    class_sizes = {}
    for x in pts.without_origin():
        k = direction_of(x, 7)
        class_sizes[k] = class_sizes.get(k, 0) + 1
    assert max(part.sizes) - min(part.sizes) <= max(class_sizes.values())


def test_line_set_examples(f3, f5, plane3, dot3):
    assert line_set((1, 0), 1, plane3, dot3).points == [(1, 0), (1, 1), (1, 2)]
    assert len(line_set((1, 0), 1, PointSet.from_points(f3, [(0, 0)]), dot3)) == 0
    plane5 = PointSet.full_space(f5, 2)
    line = line_set((1, 2), 0, plane5, BilinearForm.identity(f5, 2))
    brute = [y for y in itertools.product(range(5), repeat=2) if (y[0] + 2 * y[1]) % 5 == 0]
    assert line.points == brute and len(line) == 5
    with pytest.raises(ZeroVector):
        line_set((0, 0), 1, plane3, dot3)


@pytest.mark.parametrize("q,d", [(3, 2), (5, 2), (3, 3), (2, 3)])
def test_line_sizes(q, d):
    f = Field(q)
    full = PointSet.full_space(f, d)
    form = BilinearForm.identity(f, d)
    for x in full.without_origin():
        for lam in range(q):
            assert len(line_set(x, lam, full, form)) == q ** (d - 1)


def test_lines_in_distinct_directions_meet_at_most_once(f5):
    full = PointSet.full_space(f5, 2)
    form = BilinearForm.identity(f5, 2)
    nz = list(full.without_origin())
    for x in nz[::3]:
        for y in nz[::2]:
            if direction_of(x, 5) == direction_of(y, 5):
                continue
            for lam in range(5):
                lx = set(line_set(x, lam, full, form))
                for mu in range(5):
                    assert len(lx & set(line_set(y, mu, full, form))) <= 1


@pytest.mark.parametrize("q,count", [(2, 7), (3, 13), (5, 31)])
def test_subspace_counts(q, count):
    subs = enumerate_2subspaces(q)
    assert len(subs) == count == q * q + q + 1
    assert len({s.normal for s in subs}) == count


@pytest.mark.parametrize("q", [2, 3, 5])
def test_each_nonzero_point_on_q_plus_one_subspaces(q):
    subs = enumerate_2subspaces(q)
    for x in itertools.product(range(q), repeat=3):
        hits = sum(1 for s in subs if x in s)
        assert hits == (len(subs) if not any(x) else q + 1)


def test_subspace_basis_vectors_lie_in_plane():
    for s in enumerate_2subspaces(5):
        assert s.basis[0] in s and s.basis[1] in s


def test_pointset_rejects_duplicates_and_sorts(f5):
    with pytest.raises(ValueError):
        PointSet.from_points(f5, [(1, 1), (1, 1)])
    pts = PointSet.from_points(f5, [(3, 1), (0, 4), (3, 0)])
    assert pts.points == [(0, 4), (3, 0), (3, 1)]
    assert (3, 0) in pts and (1, 1) not in pts


def test_file_roundtrip(tmp_path, f5):
    pts = random_set(5, 3, 17, 3)
    path = tmp_path / "pts.txt"
    write_pointset(pts, path)
    assert path.read_text().splitlines()[0] == "q=5 d=3"
    back = read_pointset(path)
    assert back == pts
    assert format_pointset(back) == path.read_text()


@pytest.mark.parametrize("body", [
    "q=5 d=2\n1,2\n1,2\n",
    "q=5 d=2\n1,7\n",
    "q=5 d=2\n1,2,3\n",
    "d=2\n1,2\n",
    "q=5 d=2\n1;2\n",
])
def test_file_format_errors(tmp_path, body):
    path = tmp_path / "bad.txt"
    path.write_text(body)
    with pytest.raises(PointSetFormatError):
        read_pointset(path)


def test_file_composite_modulus_rejected(tmp_path):
    from bspec.errors import NonPrimeModulus

    path = tmp_path / "nine.txt"
    path.write_text("q=9 d=2\n1,2\n")
    with pytest.raises(NonPrimeModulus):
        read_pointset(path)
