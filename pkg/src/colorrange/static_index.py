"""Static optimal color reporting index.

Layout: a balanced binary tree whose leaves hold ceil(log2 N) consecutive
points. Each non-root node that is a left child carries R(u) (the capped list
of largest per-color maxima, descending); each right child carries L(u) (the
capped smallest per-color minima, ascending). Each internal node stores its
middle value m(u) = min of the right subtree.

A query locates one element of [a, b], asks the element's leaf for the
highest range ancestor u with a < m(u) <= b via two monotone searches
(Facts 2-3), then reads answers off R(u_l) and L(u_r). A traversal that
exhausts a full-length list means the range holds at least log N colors, and
the query falls back to a global O(log N + k) color PST.
"""

from __future__ import annotations

import bisect
import math
from typing import Optional, Sequence

from .backends import BACKENDS
from .core import (ColArray, ColoredPoint, InvalidRange, compute_prev)
from .pst import ColorPst


class _TreeNode:
    __slots__ = ("left", "right", "parent", "m", "height", "lst",
                 "leaf_lo", "leaf_hi", "leaf_idx")

    def __init__(self):
        self.left = None
        self.right = None
        self.parent = None
        self.m = None          # min value of the right subtree (internal only)
        self.height = 0
        self.lst = None        # R(u) on left children, L(u) on right children
        self.leaf_lo = 0       # covered leaf range [leaf_lo, leaf_hi)
        self.leaf_hi = 0
        self.leaf_idx = None   # set on leaves


class StaticIndex:
    def __init__(self, points: Sequence[ColoredPoint], ncolors: Optional[int] = None,
                 backend: str = "sorted"):
        self.points = list(points)
        self.n = len(self.points)
        self.values = [p.value for p in self.points]
        self.colors = [p.color for p in self.points]
        self.prevs = compute_prev(self.points)
        self.ncolors = ncolors if ncolors is not None else \
            (max(self.colors) + 1 if self.points else 0)
        # floor of 2 so that N = 2 stays a single leaf
        self.cap = max(2, math.ceil(math.log2(max(self.n, 2))))
        self._col = ColArray(self.ncolors)
        locator_cls = BACKENDS[backend]
        self.locator = locator_cls(self.values)

        # leaves are consecutive chunks of `cap` points (last one may be short)
        self.nleaves = max(1, math.ceil(self.n / self.cap)) if self.n else 0
        self.leaf_start = [i * self.cap for i in range(self.nleaves)]
        self.leaf_psts = []
        for i in range(self.nleaves):
            lo, hi = i * self.cap, min((i + 1) * self.cap, self.n)
            self.leaf_psts.append(ColorPst(
                (self.values[j], self.prevs[j], self.colors[j])
                for j in range(lo, hi)))

        self.root = self._build_tree(0, self.nleaves) if self.nleaves else None
        self.leaves: list[_TreeNode] = [None] * self.nleaves
        if self.root is not None:
            self._index_leaves(self.root)
        # per-leaf highest-range-ancestor arrays (Fact 3 monotone)
        self.k1: list[list] = [[] for _ in range(self.nleaves)]
        self.k2: list[list] = [[] for _ in range(self.nleaves)]
        for i in range(self.nleaves):
            self._build_hra(i)

        self.fallback = ColorPst(zip(self.values, self.prevs, self.colors))

    # -- construction ------------------------------------------------------

    def _point_span(self, node) -> tuple[int, int]:
        lo = node.leaf_lo * self.cap
        hi = min(node.leaf_hi * self.cap, self.n)
        return lo, hi

    def _build_tree(self, lo: int, hi: int) -> _TreeNode:
        node = _TreeNode()
        node.leaf_lo, node.leaf_hi = lo, hi
        if hi - lo == 1:
            node.leaf_idx = lo
            return node
        mid = (lo + hi) // 2
        node.left = self._build_tree(lo, mid)
        node.right = self._build_tree(mid, hi)
        node.left.parent = node
        node.right.parent = node
        node.height = 1 + max(node.left.height, node.right.height)
        node.m = self.values[mid * self.cap]
        node.left.lst = self._rlist(node.left)
        node.right.lst = self._llist(node.right)
        return node

    def _llist(self, node) -> list:
        """L(u): up to `cap` smallest per-color minima, ascending (value, color)."""
        lo, hi = self._point_span(node)
        first: dict = {}
        for j in range(lo, hi):
            c = self.colors[j]
            if c not in first:
                first[c] = self.values[j]
        ent = sorted((v, c) for c, v in first.items())
        return ent[:self.cap]

    def _rlist(self, node) -> list:
        """R(u): up to `cap` largest per-color maxima, descending (value, color)."""
        lo, hi = self._point_span(node)
        last: dict = {}
        for j in range(lo, hi):
            last[self.colors[j]] = self.values[j]
        ent = sorted(((v, c) for c, v in last.items()), reverse=True)
        return ent[:self.cap]

    def _index_leaves(self, node) -> None:
        if node.leaf_idx is not None:
            self.leaves[node.leaf_idx] = node
            return
        self._index_leaves(node.left)
        self._index_leaves(node.right)

    def _build_hra(self, leaf_idx: int) -> None:
        """K1: m of left parents bottom-up (ascending); K2: right parents
        (descending). Entries are (m, node)."""
        node = self.leaves[leaf_idx]
        k1, k2 = [], []
        while node.parent is not None:
            parent = node.parent
            if parent.left is node:
                k1.append((parent.m, parent))
            else:
                k2.append((parent.m, parent))
            node = parent
        self.k1[leaf_idx] = k1
        self.k2[leaf_idx] = k2

    # -- queries -----------------------------------------------------------

    def one_report(self, a: int, b: int, meter=None) -> Optional[ColoredPoint]:
        """Some element of S within [a, b], or None."""
        if meter is not None:
            meter.locate_ops += 1
        v = self.locator.any_in(a, b)
        if v is None:
            return None
        j = bisect.bisect_left(self.values, v)
        return ColoredPoint(v, self.colors[j])

    def leaf_of(self, value: int) -> int:
        j = bisect.bisect_right(self.values, value) - 1
        return j // self.cap

    def hra_query(self, leaf_idx: int, a: int, b: int, meter=None) -> Optional[_TreeNode]:
        """Highest ancestor u of the leaf with a < m(u) <= b, else None.

        Requires a nonempty S(leaf) intersection with [a, b]. Two monotone searches: the highest
        left parent with m <= b (K1 ascends) and the highest right parent with
        m > a (K2 descends); the higher of the two is the answer.
        """
        k1 = self.k1[leaf_idx]
        k2 = self.k2[leaf_idx]
        u1 = u2 = None
        lo, hi = 0, len(k1)
        while lo < hi:
            mid = (lo + hi) // 2
            if k1[mid][0] <= b:
                lo = mid + 1
            else:
                hi = mid
        if lo > 0:
            u1 = k1[lo - 1][1]
        lo, hi = 0, len(k2)
        while lo < hi:
            mid = (lo + hi) // 2
            if k2[mid][0] > a:
                lo = mid + 1
            else:
                hi = mid
        if lo > 0:
            u2 = k2[lo - 1][1]
        if meter is not None:
            meter.locate_ops += 1
        if u1 is None:
            return u2
        if u2 is None:
            return u1
        return u1 if u1.height >= u2.height else u2

    def query(self, a: int, b: int, meter=None) -> list:
        """Distinct colors of S within [a, b], each exactly once."""
        if a > b:
            raise InvalidRange(f"[{a}, {b}]")
        e = self.one_report(a, b, meter)
        if e is None:
            return []
        leaf_idx = self.leaf_of(e.value)
        u = self.hra_query(leaf_idx, a, b, meter)
        if u is None:
            out = self.leaf_psts[leaf_idx].query(a, b, meter)
            return self._col.dedup(out)

        out = []
        fallback = False
        rl = u.left.lst
        n_seen = 0
        for v, c in rl:
            n_seen += 1
            if v < a:
                break
            out.append(c)
        else:
            if len(rl) == self.cap:
                fallback = True
        ll = u.right.lst
        m_seen = 0
        if not fallback:
            for v, c in ll:
                m_seen += 1
                if v > b:
                    break
                out.append(c)
            else:
                if len(ll) == self.cap:
                    fallback = True
        if meter is not None:
            meter.touches += n_seen + m_seen
        if fallback:
            out = self.fallback.query(a, b, meter)
        return self._col.dedup(out)
