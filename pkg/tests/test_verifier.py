import json
import math

import numpy as np
import pytest

from bspec import BilinearForm, Field, PointSet, partition_by_directions
from bspec.engine import SpectrumTensor, spectrum
from bspec.errors import EmptyTensor, TooFewDirections, ZeroParameter
from bspec.verifier import (
    CHECKS,
    LemmaReport,
    check_charsum_identity,
    check_l2_bound,
    check_main_theorem,
    check_pair_concentration,
    check_path_bound,
    check_quadruple_error,
    check_zero_pairs,
    cs_support_bound,
    cs_support_certificate,
    empirical_constant,
    l2_bound_terms,
    run_check,
    theorem_threshold,
)

from conftest import random_set

REPORT_FIELDS = {"check", "q", "d", "sizes", "computed", "bounds", "constant",
                 "exact_pass", "notes", "seed", "elapsed_ms"}


def _empty(fld, d=2):
    return PointSet(fld, d, np.empty((0, d)))


def test_empirical_constant_rules():
    assert empirical_constant(0, {}) == 0.0
    assert empirical_constant(0, {"a": 0}) == 0.0
    assert empirical_constant(3, {"a": 0}) is None
    assert empirical_constant(1, {"a": 1, "b": 2}) == pytest.approx(1 / 3)


def test_pair_concentration_examples(f3, f5, plane3, dot3):
    r = check_pair_concentration(plane3, plane3, dot3)
    assert r.computed["lhs"] == 3
    assert r.bounds["q^((d-1)/2)*sqrt(|E||F|)"] == pytest.approx(9 * math.sqrt(3))
    assert r.constant == pytest.approx(0.19245, abs=1e-4)
    assert r.exact_pass is None

    empty = _empty(f3)
    assert check_pair_concentration(empty, empty, dot3).constant == 0

    form5 = BilinearForm.identity(f5, 2)
    one = PointSet.from_points(f5, [(1, 0)])
    r = check_pair_concentration(one, one, form5)
    assert r.computed["lhs"] == pytest.approx(0.8)
    assert r.constant == pytest.approx(0.8 / math.sqrt(5))


def test_quadruple_error_examples(f3, plane3, dot3):
    r = check_quadruple_error(plane3, plane3, dot3)
    assert r.computed["lhs"] == 54 and r.computed["quadruples"] == 2241
    assert r.bounds == {"q^d*|E||F|": 729}
    assert r.constant == pytest.approx(54 / 729)
    one = PointSet.from_points(f3, [(1, 2)])
    r = check_quadruple_error(one, one, dot3)
    assert r.computed["lhs"] == pytest.approx(1 - 1 / 3)
    assert r.constant == pytest.approx((2 / 3) / 9)
    empty = _empty(f3)
    assert check_quadruple_error(empty, empty, dot3).constant == 0


def test_charsum_identity_examples(f3, f5, plane3, dot3):
    one = PointSet.from_points(f3, [(1, 0)])
    assert check_charsum_identity(one, one, dot3).exact_pass is True
    r = check_charsum_identity(plane3, plane3, dot3)
    assert r.exact_pass is True
    assert r.computed["q_times_quadruples"] == 6723
    assert r.computed["charsum_re"] == pytest.approx(6723, rel=1e-9)
    assert r.computed["direct_re"] == pytest.approx(6723, rel=1e-9)
    form5 = BilinearForm.identity(f5, 2)
    for seed in range(5):
        e, f = random_set(5, 2, 12, seed), random_set(5, 2, 12, seed + 100)
        assert check_charsum_identity(e, f, form5).exact_pass is True


def test_charsum_identity_large_skips_direct(monkeypatch, plane3, dot3):
    from bspec.engine import counting

    monkeypatch.setattr(counting, "DIRECT_CHARSUM_BUDGET", 10)
    r = check_charsum_identity(plane3, plane3, dot3)
    assert r.exact_pass is True and "direct_re" not in r.computed
    assert "skipped" in r.notes


def test_path_bound_examples(f3, f5, plane3, dot3):
    r = check_path_bound(plane3, 1, 1, dot3)
    assert r.computed["lhs"] == 72
    assert r.bounds["|E|^3/q^2"] == pytest.approx(81)
    assert r.constant == pytest.approx(72 / 81)
    nz = PointSet.nonzero_space(f3, 2)
    r = check_path_bound(nz, 1, 1, dot3)
    assert r.computed["lhs"] == 72
    assert r.bounds["|E|^3/q^2"] == pytest.approx(512 / 9)
    assert r.constant == pytest.approx(81 / 64)
    assert "below" not in r.notes  # 8 >= 3^(3/2)

    form5 = BilinearForm.identity(f5, 2)
    one = PointSet.from_points(f5, [(1, 0)])
    r = check_path_bound(one, 1, 1, form5)
    assert r.computed["lhs"] == 1 and r.constant == pytest.approx(25)
    assert "below the size hypothesis" in r.notes
    with pytest.raises(ZeroParameter):
        check_path_bound(plane3, 0, 1, dot3)
    with pytest.raises(ZeroParameter):
        check_path_bound(plane3, 1, 3, dot3)


def test_zero_pairs_examples(f3, plane3, dot3):
    r = check_zero_pairs(plane3, plane3, dot3)
    assert r.computed["lhs"] == 33
    assert sum(r.bounds.values()) == pytest.approx(54)
    assert r.exact_pass is True
    nz = PointSet.nonzero_space(f3, 2)
    r = check_zero_pairs(nz, nz, dot3)
    # 16 pairs: each nonzero x is orthogonal to exactly two nonzero y
    assert r.computed["lhs"] == 16
    assert sum(r.bounds.values()) == pytest.approx(64 / 3 + 24)
    assert r.exact_pass is True
    empty = _empty(f3)
    r = check_zero_pairs(empty, empty, dot3)
    assert r.computed["lhs"] == 0 and r.exact_pass is True and r.constant == 0


def test_l2_bound_examples(f3, f5):
    form5 = BilinearForm.identity(f5, 2)
    r = check_l2_bound(PointSet.nonzero_space(f5, 2), form5)
    assert r.computed["lhs"] == 3584 == r.computed["oracle_l2"]
    assert r.exact_pass is True
    assert r.sizes == [24, 8, 8, 8]
    assert set(r.bounds) == {"|E|^6/q^3", "q^2*|E|^3", "|E|^4"}
    assert r.constant == pytest.approx(3584 / sum(r.bounds.values()))
    assert "dominant term" in r.notes

    three = PointSet.from_points(f3, [(1, 0), (0, 1), (1, 1)])
    r = check_l2_bound(three, BilinearForm.identity(f3, 2))
    assert r.computed["lhs"] == 1
    assert sum(r.bounds.values()) >= 3 ** 4
    assert r.constant < 0.013

    two = PointSet.from_points(f3, [(1, 0), (2, 0), (0, 1)])
    with pytest.raises(TooFewDirections):
        check_l2_bound(two, BilinearForm.identity(f3, 2))


def test_l2_bound_terms_by_dimension():
    assert set(l2_bound_terms(10, 5, 2)) == {"|E|^6/q^3", "q^2*|E|^3", "|E|^4"}
    assert len(l2_bound_terms(10, 5, 3)) == 3
    assert set(l2_bound_terms(10, 5, 4)) == {"|E|^6/q^3", "q^(2d-2)*|E|^3"}
    assert l2_bound_terms(10, 5, 4)["q^(2d-2)*|E|^3"] == 5 ** 6 * 1000


def test_cs_certificate_examples(f3, f5, dot3):
    single = spectrum(PointSet.from_points(f3, [(1, 0)]), PointSet.from_points(f3, [(0, 1)]),
                      PointSet.from_points(f3, [(1, 1)]), dot3)
    r = cs_support_certificate(single)
    assert r.exact_pass is True and r.computed["slack"] == 0 and r.notes == "tight"

    for s, v in [(1, 7), (5, 3), (27, 1), (12, 1000)]:
        dense = np.zeros(27, dtype=np.int64)
        dense[np.arange(s) * (27 // s)] = v
        r = cs_support_certificate(SpectrumTensor(3, dense=dense))
        assert r.bounds["mass^2/l2"] == s == r.computed["lhs"]
        assert r.exact_pass is True and r.notes == "tight"

    parts = partition_by_directions(PointSet.nonzero_space(f5, 2)).parts
    r = cs_support_bound(spectrum(*parts, BilinearForm.identity(f5, 2)))
    assert r.exact_pass is True
    assert r.computed["slack"] == pytest.approx(80 - 512 ** 2 / 3584)
    assert r.elapsed_ms is not None

    with pytest.raises(EmptyTensor):
        cs_support_certificate(SpectrumTensor(3, dense=np.zeros(27, dtype=np.int64)))


def test_cs_certificate_on_random_tensors():
    rng = np.random.default_rng(7)
    for _ in range(200):
        dense = rng.integers(0, 5, 125) * (rng.random(125) < rng.random())
        if dense.sum() == 0:
            continue
        assert cs_support_certificate(SpectrumTensor(5, dense=dense.astype(np.int64))).exact_pass


def test_main_theorem_examples(f3, f5):
    r = check_main_theorem(PointSet.nonzero_space(f5, 2), BilinearForm.identity(f5, 2))
    assert r.computed["lhs"] == 80
    assert r.constant == pytest.approx(80 / 125)
    assert r.computed["size_ratio"] == pytest.approx(24 / 5 ** (5 / 3))
    assert r.exact_pass is True
    three = PointSet.from_points(f3, [(1, 0), (0, 1), (1, 1)])
    r = check_main_theorem(three, BilinearForm.identity(f3, 2))
    assert r.computed["lhs"] <= 1 and r.constant < 0.05


def test_theorem_threshold():
    assert theorem_threshold(11, 2)[1] == pytest.approx(11 ** (5 / 3))
    assert theorem_threshold(5, 3)[1] == pytest.approx(5 ** (3 - 2 / 3))


def test_report_schema_and_roundtrip(plane3, dot3):
    for name in sorted(CHECKS):
        e = plane3 if name not in ("l2_bound", "main_theorem", "cs_support") else plane3.without_origin()
        r = run_check(name, e, dot3)
        d = json.loads(r.to_json())
        assert set(d) == REPORT_FIELDS
        assert d["check"] == name
        assert LemmaReport.from_dict(d) == r
    with pytest.raises(KeyError):
        run_check("nope", plane3, dot3)


def test_run_check_cs_support_fills_context(f5):
    r = run_check("cs_support", PointSet.nonzero_space(f5, 2), BilinearForm.identity(f5, 2))
    assert r.d == 2 and r.sizes == [24, 8, 8, 8]


def test_reports_are_deterministic(f5):
    e = random_set(7, 2, 26, 3)
    form = BilinearForm.identity(e.field, 2)
    for name in ("pair_concentration", "zero_pairs", "l2_bound", "main_theorem"):
        a, b = run_check(name, e, form), run_check(name, e, form, threads=3)
        a.elapsed_ms = b.elapsed_ms = None
        assert a == b
