import random

from colorrange.core import (ColoredPoint, CostMeter, FastOracle, Range,
                             oracle_k_leftmost, oracle_k_rightmost,
                             oracle_report)
from colorrange.slow_index import SlowIndex, SlowTree
from conftest import random_instance


def test_fanout_law_fresh_builds():
    rng = random.Random(61)
    for n in (5, 17, 64, 300, 1000, 4096):
        pts = random_instance(rng, n, 8 * n, 9)
        t = SlowTree((p.value, p.color) for p in pts)
        t.check_fanout_law()
        t.check_consistency()


def test_query_matches_oracle_static():
    rng = random.Random(63)
    for _ in range(40):
        pts = random_instance(rng, rng.randrange(1, 300), 1200, 9)
        idx = SlowIndex(pts)
        for _ in range(60):
            a = rng.randrange(1, 1220)
            b = rng.randrange(a, 1220)
            got = idx.query(a, b)
            assert set(got) == oracle_report(pts, Range(a, b))
            assert len(got) == len(set(got))


def test_emissions_at_most_twice_per_color():
    rng = random.Random(67)
    for _ in range(30):
        pts = random_instance(rng, rng.randrange(2, 400), 1500, 6)
        tree = SlowTree((p.value, p.color) for p in pts)
        for _ in range(80):
            a = rng.randrange(1, 1520)
            b = rng.randrange(a, 1520)
            ems, over = tree.query(a, b)
            assert not over
            per = {}
            for v, c, p in ems:
                per[c] = per.get(c, 0) + 1
            assert all(n <= 2 for n in per.values())
            # and exactly one emission per color after the prev-filter
            filtered = [c for _, c, p in ems if p < a]
            assert sorted(set(filtered)) == sorted(filtered)


def test_updates_against_oracle_interleaved():
    rng = random.Random(69)
    pts = random_instance(rng, 200, 4000, 8)
    idx = SlowIndex(pts)
    live = {p.value: p.color for p in pts}
    for step in range(2500):
        r = rng.random()
        if r < 0.35:
            v = rng.randrange(1, 4000)
            if v not in live:
                c = rng.randrange(8)
                live[v] = c
                idx.insert(v, c)
        elif r < 0.6 and live:
            v = rng.choice(list(live))
            del live[v]
            idx.delete(v)
        else:
            a = rng.randrange(1, 4000)
            b = rng.randrange(a, 4000)
            want = {c for v, c in live.items() if a <= v <= b}
            assert set(idx.query(a, b)) == want
        if step % 100 == 99:
            idx.fwd.check_consistency()
            idx.rev.check_consistency()


def test_insert_placement_examples():
    # a globally new color lands in the root's C-set
    pts = [ColoredPoint(v, 0) for v in (10, 20, 30, 40, 50, 60, 70, 80, 90)]
    t = SlowTree((p.value, p.color) for p in pts)
    t.insert(55, 7)
    assert t.placed[55] is t.root
    # inserting e just left of a same-color element in the same bucket
    # evicts that element from every C-set
    leaf = t.leaf_of(55)
    neighbor = None
    for v in t.vals:
        if t.leaf_of(v) is leaf and v > 55:
            neighbor = v
            break
    if neighbor is not None:
        t2_items = [(v, t.colors[v]) for v in t.vals]
        t.insert(54, t.colors[neighbor])
        # now give neighbor the same color as 54's predecessor chain
        t.check_consistency()


def test_same_bucket_eviction():
    t = SlowTree([(10, 0), (11, 1), (12, 0), (500, 2), (600, 2), (700, 2),
                  (800, 2), (900, 2)])
    # 12's prev is 10; they share a bucket iff bucket spans both
    t.check_consistency()
    leaf10 = t.leaf_of(10)
    if t.leaf_of(12) is leaf10:
        assert t.placed[12] is None
    t.delete(10)
    t.check_consistency()
    # 12 is now the leftmost of color 0 -> placed at the root
    assert t.placed[12] is t.root


def test_delete_sole_color_element():
    t = SlowTree([(1, 0), (2, 1), (3, 0), (9, 2), (20, 1), (30, 0), (40, 2),
                  (50, 1)])
    t.delete(9)  # color 2's relocation of a successor is vacuous here? no: 40
    t.check_consistency()
    ems, _ = t.query(1, 50)
    assert {c for _, c, _ in ems} == {0, 1, 2}


def test_k_leftmost_exhaustive_small():
    rng = random.Random(73)
    for _ in range(8):
        n = rng.randrange(1, 64)
        u = rng.randrange(max(4, n), 80)
        pts = random_instance(rng, n, u, rng.randrange(1, 8))
        idx = SlowIndex(pts)
        for a in range(1, u + 1):
            for b in range(a, u + 1):
                for k in range(1, 11):
                    got = idx.k_leftmost(a, b, k)
                    assert got == oracle_k_leftmost(pts, Range(a, b), k), \
                        (pts, a, b, k)


def test_k_rightmost_matches_oracle():
    rng = random.Random(79)
    for _ in range(10):
        pts = random_instance(rng, rng.randrange(1, 200), 900, 7)
        idx = SlowIndex(pts)
        for _ in range(150):
            a = rng.randrange(1, 920)
            b = rng.randrange(a, 920)
            k = rng.randrange(1, 9)
            assert idx.k_rightmost(a, b, k) == \
                oracle_k_rightmost(pts, Range(a, b), k)


def test_k_leftmost_randomized_midsize():
    rng = random.Random(83)
    pts = random_instance(rng, 1 << 12, 1 << 15, 40)
    idx = SlowIndex(pts)
    fo = FastOracle(pts)
    for _ in range(600):
        a = rng.randrange(1, 1 << 15)
        b = rng.randrange(a, 1 << 15)
        k = rng.randrange(1, 12)
        assert idx.k_leftmost(a, b, k) == fo.k_leftmost(a, b, k)


def test_touch_scaling_does_not_regress():
    rng = random.Random(89)
    ratios = []
    for n in (1 << 8, 1 << 11, 1 << 14):
        pts = random_instance(rng, n, 8 * n, 24)
        tree = SlowTree((p.value, p.color) for p in pts)
        meter = CostMeter()
        worst = 0.0
        samples = []
        for _ in range(300):
            a = rng.randrange(1, 8 * n)
            b = rng.randrange(a, 8 * n)
            meter.reset()
            ems, _ = tree.query(a, b, meter=meter)
            n_ab = tree_count(tree, a, b)
            k = len({c for _, c, p in ems if p < a})
            bound = n_ab ** 0.5 + max(1, n.bit_length() - 1).bit_length() + k
            samples.append(meter.touches / max(1.0, bound))
        samples.sort()
        ratios.append(samples[len(samples) // 2])
    assert max(ratios) <= 16
    # the constant must not grow with n: largest instance vs smallest
    assert ratios[-1] <= ratios[0]


def tree_count(tree, a, b):
    import bisect
    return bisect.bisect_right(tree.vals, b) - bisect.bisect_left(tree.vals, a)
