import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorrange.core import (ColArray, ColoredPoint, DuplicateCoordinate,
                             FastOracle, InvalidRange, Range, compute_prev,
                             make_range, normalize_input, oracle_k_leftmost,
                             oracle_k_rightmost, oracle_report)
from conftest import random_instance


def test_normalize_sorts_and_remaps():
    pts, remap = normalize_input([(5, "red"), (1, "red"), (3, "blue")])
    assert pts == [ColoredPoint(1, 0), ColoredPoint(3, 1), ColoredPoint(5, 0)]
    assert remap.forward == {"red": 0, "blue": 1}


def test_normalize_empty():
    pts, remap = normalize_input([])
    assert pts == [] and len(remap) == 0


def test_normalize_duplicate_coordinate():
    with pytest.raises(DuplicateCoordinate) as exc:
        normalize_input([(4, "x"), (4, "y")])
    assert exc.value.value == 4


def test_normalize_rejects_reserved_zero():
    with pytest.raises(ValueError):
        normalize_input([(0, "x")])


def test_compute_prev_e1(e1):
    # oracle: per-color backward scan
    expected = []
    for i, (v, c) in enumerate(e1):
        best = 0
        for w, d in e1[:i]:
            if d == c and w < v:
                best = max(best, w)
        expected.append(best)
    assert expected == [0, 0, 1, 0, 3, 5, 7, 9]
    assert compute_prev(e1) == expected


def test_compute_prev_trivial():
    assert compute_prev([ColoredPoint(7, 2)]) == [0]
    chain = [ColoredPoint(1, 0), ColoredPoint(2, 0), ColoredPoint(3, 0)]
    assert compute_prev(chain) == [0, 1, 2]


def test_prev_chains_strictly_increase():
    rng = random.Random(7)
    for _ in range(50):
        pts = random_instance(rng, rng.randrange(1, 200), 1000, 8)
        prevs = compute_prev(pts)
        by_color = {}
        for (v, c), p in zip(pts, prevs):
            by_color.setdefault(c, []).append((v, p))
        for entries in by_color.values():
            assert entries[0][1] == 0
            for (v0, _), (v1, p1) in zip(entries, entries[1:]):
                assert p1 == v0  # chain links exactly to the prior element


def test_oracle_report_e1(e1):
    assert oracle_report(e1, Range(4, 13)) == {0, 2, 1}
    assert oracle_report(e1, Range(21, 100)) == set()
    assert oracle_report(e1, Range(1, 20)) == {0, 1, 2}


def test_oracle_k_leftmost_e1(e1):
    assert oracle_k_leftmost(e1, Range(4, 20), 2) == [0, 2]
    assert oracle_k_leftmost(e1, Range(4, 20), 99) == [0, 2, 1]
    assert oracle_k_leftmost(e1, Range(8, 8), 1) == []


def test_oracle_k_rightmost_e1(e1):
    # scanning right-to-left from 20: B(20), G(15), R(12)
    assert oracle_k_rightmost(e1, Range(4, 20), 2) == [1, 2]
    assert oracle_k_rightmost(e1, Range(4, 20), 99) == [1, 2, 0]


def test_three_sided_predicate_reduction():
    # {e in [a,b] : prev(e) < a} holds exactly one element per distinct color
    rng = random.Random(3)
    for _ in range(200):
        pts = random_instance(rng, rng.randrange(1, 120), 400, 9)
        prevs = compute_prev(pts)
        a = rng.randrange(1, 401)
        b = rng.randrange(a, 401)
        hits = [c for (v, c), p in zip(pts, prevs) if a <= v <= b and p < a]
        assert sorted(hits) == sorted(oracle_report(pts, Range(a, b)))


@given(st.lists(st.tuples(st.integers(1, 300), st.integers(0, 5)), max_size=60))
@settings(max_examples=80, deadline=None)
def test_compute_prev_idempotent_under_resort(pairs):
    seen = set()
    pts = []
    for v, c in pairs:
        if v not in seen:
            seen.add(v)
            pts.append(ColoredPoint(v, c))
    pts.sort()
    prevs = compute_prev(pts)
    assert prevs == compute_prev(sorted(pts))
    for (v, c), p in zip(pts, prevs):
        assert p < v
        if p != 0:
            assert ColoredPoint(p, c) in pts


def test_fast_oracle_matches_scan():
    rng = random.Random(11)
    pts = random_instance(rng, 300, 2000, 12)
    fo = FastOracle(pts)
    for _ in range(300):
        a = rng.randrange(1, 2001)
        b = rng.randrange(a, 2001)
        assert fo.report(a, b) == oracle_report(pts, Range(a, b))
        k = rng.randrange(0, 15)
        assert fo.k_leftmost(a, b, k) == oracle_k_leftmost(pts, Range(a, b), k)
        assert fo.k_rightmost(a, b, k) == oracle_k_rightmost(pts, Range(a, b), k)


def test_make_range_validates():
    assert make_range(2, 2) == Range(2, 2)
    with pytest.raises(InvalidRange):
        make_range(3, 2)


def test_colarray_dedup():
    col = ColArray(4)
    assert col.dedup([1, 0, 1, 2, 0]) == [1, 0, 2]
    assert col.dedup([]) == []
    # array must be clean between calls
    assert col.dedup([2, 2, 2]) == [2]
    assert not any(col.bits)
