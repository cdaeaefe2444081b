"""Range tree with doubly-exponential fanout: slow queries, fast updates.

A node over s elements has ceil(sqrt(s)) children, so depth-d nodes hold
about n^((1/2)^d) elements and the height is O(loglog n). Leaves are small
buckets (at most LEAF_CUTOFF elements at build time).

Each element e is stored in exactly one C-set: at the highest node u whose
subtree excludes prev(e) (nothing, if prev(e) shares e's leaf). Per node the
C-set is kept three ways: V sorted by value, P sorted by prev, and a value ->
(color, prev) map. Because subtree spans are contiguous, membership tests are
single comparisons against live subtree minima, and placements stay valid
under updates: a placement can only be invalidated by deleting prev(e)
itself, which relocates e explicitly.

A query [a, b] walks the path to succ(a) below the LCA of the boundary
leaves, reporting C(u) above a by value, right siblings and covered children
by prev < a, the rightmost child by value <= b, and the LCA plus its proper
ancestors with both filters. Every color is emitted at most twice; dropping
emissions with prev >= a leaves exactly the leftmost in-range element per
distinct color.

k-leftmost color selection binary-searches the right boundary using capped
counting queries, then reports the reduced range.
"""

from __future__ import annotations

import bisect
import math
from typing import Iterable, Optional

from .core import ColArray, DuplicateX, NotFound, PREV_SENTINEL

LEAF_CUTOFF = 4
MIRROR_BASE = 1 << 62


class _Node:
    __slots__ = ("children", "seps", "parent", "size", "cap", "alive",
                 "minv", "maxv", "bucket", "cvals", "cprevs", "cmap", "depth")

    def __init__(self):
        self.children: list = []
        self.seps: list = []       # static routing: seps[i] = build-min of children[i+1]
        self.parent = None
        self.size = 0
        self.cap = 0
        self.alive = True
        self.minv = None           # live subtree min/max
        self.maxv = None
        self.bucket: list = []     # leaf only: sorted live values
        self.cvals: list = []      # V(u): C-set values, sorted
        self.cprevs: list = []     # P(u): (prev, value), sorted
        self.cmap: dict = {}       # value -> (color, prev)
        self.depth = 0

    @property
    def is_leaf(self):
        return not self.children

    def c_insert(self, value, color, prev):
        bisect.insort(self.cvals, value)
        bisect.insort(self.cprevs, (prev, value))
        self.cmap[value] = (color, prev)

    def c_remove(self, value):
        color, prev = self.cmap.pop(value)
        i = bisect.bisect_left(self.cvals, value)
        del self.cvals[i]
        i = bisect.bisect_left(self.cprevs, (prev, value))
        del self.cprevs[i]
        return color, prev


class SlowTree:
    def __init__(self, items: Iterable[tuple] = ()):
        items = sorted(items)
        self.vals: list = [v for v, _ in items]
        self.colors: dict = {v: c for v, c in items}
        self.by_color: dict = {}
        for v, c in items:
            self.by_color.setdefault(c, []).append(v)
        self.placed: dict = {}
        self._rebuild_tree()

    # -- construction --------------------------------------------------------

    def _rebuild_tree(self) -> None:
        self.n0 = max(1, len(self.vals))
        self.deleted_total = 0
        self.root = self._build(self.vals, 0)
        self.placed.clear()
        for v in self.vals:
            self._place(v)

    def _build(self, values: list, depth: int) -> _Node:
        node = _Node()
        node.size = len(values)
        node.depth = depth
        node.minv = values[0] if values else None
        node.maxv = values[-1] if values else None
        if len(values) <= LEAF_CUTOFF:
            node.bucket = list(values)
            node.cap = max(2 * len(values), 2 * LEAF_CUTOFF)
            return node
        node.cap = 2 * len(values)
        nc = math.ceil(math.sqrt(len(values)))
        base, extra = divmod(len(values), nc)
        lo = 0
        for i in range(nc):
            sz = base + (1 if i < extra else 0)
            child = self._build(values[lo:lo + sz], depth + 1)
            child.parent = node
            node.children.append(child)
            lo += sz
        node.seps = [c.minv for c in node.children[1:]]
        return node

    # -- navigation ----------------------------------------------------------

    def leaf_of(self, value) -> _Node:
        node = self.root
        while not node.is_leaf:
            node = node.children[bisect.bisect_right(node.seps, value)]
        return node

    def path_of(self, value) -> list:
        out = []
        node = self.root
        while True:
            out.append(node)
            if node.is_leaf:
                return out
            node = node.children[bisect.bisect_right(node.seps, value)]

    def prev_of(self, value) -> int:
        lst = self.by_color[self.colors[value]]
        i = bisect.bisect_left(lst, value)
        return lst[i - 1] if i > 0 else PREV_SENTINEL

    def next_of(self, value) -> Optional[int]:
        lst = self.by_color[self.colors[value]]
        i = bisect.bisect_right(lst, value)
        return lst[i] if i < len(lst) else None

    # -- C-set placement -----------------------------------------------------

    def _placement_for(self, value, prev) -> Optional[_Node]:
        """Highest node on value's path whose live min exceeds prev."""
        path = self.path_of(value)
        best = None
        for node in reversed(path):  # leaf first
            if node.minv is not None and node.minv > prev:
                best = node
            else:
                break
        return best

    def _place(self, value) -> None:
        prev = self.prev_of(value)
        node = self._placement_for(value, prev)
        self.placed[value] = node
        if node is not None:
            node.c_insert(value, self.colors[value], prev)

    def _unplace(self, value) -> None:
        node = self.placed.pop(value)
        if node is not None:
            node.c_remove(value)

    # -- updates --------------------------------------------------------------

    def insert(self, value, color) -> None:
        i = bisect.bisect_left(self.vals, value)
        if i < len(self.vals) and self.vals[i] == value:
            raise DuplicateX(value)
        self.vals.insert(i, value)
        self.colors[value] = color
        lst = self.by_color.setdefault(color, [])
        bisect.insort(lst, value)

        path = self.path_of(value)
        leaf = path[-1]
        bisect.insort(leaf.bucket, value)
        for node in path:
            node.size += 1
            if node.minv is None or value < node.minv:
                node.minv = value
            if node.maxv is None or value > node.maxv:
                node.maxv = value

        self._place(value)
        nxt = self.next_of(value)
        if nxt is not None:
            self._unplace(nxt)
            self._place(nxt)

        # bottom-up splits; the root regrows the whole tree
        for node in reversed(path):
            if node.size >= node.cap:
                if node.parent is None:
                    self._rebuild_tree()
                    return
                self._split(node)

    def delete(self, value) -> None:
        i = bisect.bisect_left(self.vals, value)
        if i >= len(self.vals) or self.vals[i] != value:
            raise NotFound(value)
        nxt = self.next_of(value)
        del self.vals[i]
        color = self.colors.pop(value)
        lst = self.by_color[color]
        lst.remove(value)
        if not lst:
            del self.by_color[color]

        path = self.path_of(value)
        path[-1].bucket.remove(value)
        for node in path:
            node.size -= 1
        for node in reversed(path):
            if node.is_leaf:
                node.minv = node.bucket[0] if node.bucket else None
                node.maxv = node.bucket[-1] if node.bucket else None
            else:
                mins = [c.minv for c in node.children if c.minv is not None]
                maxs = [c.maxv for c in node.children if c.maxv is not None]
                node.minv = min(mins) if mins else None
                node.maxv = max(maxs) if maxs else None

        self._unplace(value)
        if nxt is not None:
            self._unplace(nxt)
            self._place(nxt)

        self.deleted_total += 1
        if self.deleted_total >= max(1, self.n0 // 2):
            self._rebuild_tree()

    def _split(self, node) -> None:
        """Replace an overfull node with two rebuilt halves; redo placements
        of elements whose placement node was destroyed."""
        parent = node.parent
        items = self._values_under(node)
        for n in self._nodes_under(node):
            n.alive = False
        mid = len(items) // 2
        left = self._build(items[:mid], node.depth)
        right = self._build(items[mid:], node.depth)
        idx = parent.children.index(node)
        left.parent = right.parent = parent
        parent.children[idx:idx + 1] = [left, right]
        # the old separator still bounds `left` from below; the split point
        # items[mid] is live and bounds `right`
        parent.seps.insert(idx, items[mid])
        for v in items:
            node_v = self.placed[v]
            if node_v is None or not node_v.alive:
                self.placed.pop(v)
                self._place(v)

    def _values_under(self, node) -> list:
        out = []
        stack = [node]
        while stack:
            n = stack.pop()
            if n.is_leaf:
                out.extend(n.bucket)
            else:
                stack.extend(n.children)
        out.sort()
        return out

    def _nodes_under(self, node) -> list:
        out = []
        stack = [node]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(n.children)
        return out

    # -- queries ---------------------------------------------------------------

    def query(self, a, b, meter=None, cap: Optional[int] = None):
        """Raw emissions [(value, color, prev)] for [a, b] plus overflow flag.

        Every color appears at most twice; emissions with prev >= a are the
        step-(iii) artifacts. With `cap`, returns (partial, True) once more
        than cap emissions accumulate.
        """
        out: list = []
        touches = 0
        i = bisect.bisect_left(self.vals, a)
        if i >= len(self.vals) or self.vals[i] > b:
            if meter is not None:
                meter.locate_ops += 1
            return out, False
        ea = self.vals[i]
        eb = self.vals[bisect.bisect_right(self.vals, b) - 1]
        if meter is not None:
            meter.locate_ops += 1

        pa = self.path_of(ea)
        pb = self.path_of(eb)
        leaf_a, leaf_b = pa[-1], pb[-1]

        def emit(value, color, prev):
            out.append((value, color, prev))

        if leaf_a is leaf_b:
            touches += 1
            for v in leaf_a.bucket:
                if a <= v <= b:
                    touches += 1
                    p = self.prev_of(v)
                    if p < a:
                        emit(v, self.colors[v], p)
            if meter is not None:
                meter.touches += touches
            return out, False

        # lowest common ancestor: paths share a prefix from the root
        k = 0
        while k < min(len(pa), len(pb)) and pa[k] is pb[k]:
            k += 1
        vq = pa[k - 1]
        ca, cb = pa[k], pb[k]
        l_idx = vq.children.index(ca)
        r_idx = vq.children.index(cb)
        below = pa[k:]  # ca ... leaf_a

        overflow = False

        def over():
            return cap is not None and len(out) > cap

        # (i) C(u) above a for path nodes below vq; additionally the boundary
        # bucket is scanned for elements stored in no C-set (their prev shares
        # the bucket), which still qualify when the bucket straddles a
        for u in below:
            touches += 1
            j = bisect.bisect_left(u.cvals, a)
            for v in u.cvals[j:]:
                touches += 1
                c, p = u.cmap[v]
                emit(v, c, p)
            if over():
                break
        if not over():
            touches += 1
            for v in leaf_a.bucket:
                if v >= a and self.placed[v] is None:
                    touches += 1
                    p = self.prev_of(v)
                    if p < a:
                        emit(v, self.colors[v], p)

        # (ii) right siblings below vq, and vq's covered children: prev < a
        if not over():
            sibs = []
            for u in below:
                p = u.parent
                if p is vq:
                    continue
                idx = p.children.index(u)
                sibs.extend(p.children[idx + 1:])
            sibs.extend(vq.children[l_idx + 1:r_idx])
            for s in sibs:
                touches += 1
                j = bisect.bisect_left(s.cprevs, (a, -1))
                for p, v in s.cprevs[:j]:
                    touches += 1
                    emit(v, s.cmap[v][0], p)
                if over():
                    break

        # (iii) C(v_r) up to b by value (may emit non-leftmost occurrences)
        if not over():
            touches += 1
            j = bisect.bisect_right(cb.cvals, b)
            for v in cb.cvals[:j]:
                touches += 1
                c, p = cb.cmap[v]
                emit(v, c, p)

        # (iv) vq and its proper ancestors: C(w) within [a, b]
        if not over():
            for w in reversed(pa[:k]):
                touches += 1
                j = bisect.bisect_left(w.cvals, a)
                jj = bisect.bisect_right(w.cvals, b)
                for v in w.cvals[j:jj]:
                    touches += 1
                    c, p = w.cmap[v]
                    emit(v, c, p)
                if over():
                    break

        if meter is not None:
            meter.touches += touches
        return out, over()

    def count_capped(self, a, b, k) -> int:
        """Distinct-color count, reported exactly up to k (k+1 means > k)."""
        ems, overflow = self.query(a, b, cap=2 * k)
        if overflow:
            return k + 1
        return sum(1 for _, _, p in ems if p < a)

    def k_leftmost(self, a, b, k, meter=None) -> list:
        """The k leftmost distinct colors of [a, b], as (value, color) pairs
        ordered by first occurrence."""
        if k <= 0 or a > b:
            return []
        if self.count_capped(a, b, k) < k:
            bprime = b
        else:
            lo, hi = a, b
            while lo < hi:
                mid = (lo + hi) // 2
                if self.count_capped(a, mid, k) >= k:
                    hi = mid
                else:
                    lo = mid + 1
            bprime = lo
        ems, _ = self.query(a, bprime, meter=meter)
        hits = sorted((v, c) for v, c, p in ems if p < a)
        return hits[:k]

    # -- invariant checks ------------------------------------------------------

    def check_consistency(self) -> None:
        """Maintained placements/C-sets equal the from-scratch recomputation."""
        for v in self.vals:
            want = self._placement_for(v, self.prev_of(v))
            got = self.placed[v]
            assert got is want, f"placement of {v}"
        for node in self._nodes_under(self.root):
            members = sorted(node.cmap)
            assert members == node.cvals
            assert sorted((p, v) for v, (_, p) in node.cmap.items()) == node.cprevs
            for v, (c, p) in node.cmap.items():
                assert self.colors[v] == c and self.prev_of(v) == p
        # definitional chain form: nodes with prev(e) < live-min form a prefix
        # of the leaf-to-root path, topped by the placement node
        for v in self.vals:
            path = self.path_of(v)
            flags = [n.minv > self.prev_of(v) for n in reversed(path)]
            run = 0
            for f in flags:
                if f:
                    run += 1
                else:
                    break
            assert all(not f for f in flags[run:])
            want = self.placed[v]
            if run == 0:
                assert want is None
            else:
                assert want is list(reversed(path))[run - 1]

    def check_fanout_law(self) -> None:
        n = max(2, len(self.vals))
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                continue
            nominal = math.ceil(n ** (0.5 ** (node.depth + 1)))
            assert math.ceil(nominal / 2) <= len(node.children) <= 2 * nominal, \
                (node.depth, len(node.children), nominal)
            stack.extend(node.children)


class SlowIndex:
    """Public facade: forward tree plus a mirrored twin for rightmost queries."""

    def __init__(self, points: Iterable[tuple] = ()):
        pts = list(points)
        self.fwd = SlowTree((v, c) for v, c in pts)
        self.rev = SlowTree((MIRROR_BASE - v, c) for v, c in pts)
        self._col = ColArray(1 + max((c for _, c in pts), default=-1))

    def __len__(self):
        return len(self.fwd.vals)

    def insert(self, value, color) -> None:
        self.fwd.insert(value, color)
        self.rev.insert(MIRROR_BASE - value, color)
        self._col.grow(color + 1)

    def delete(self, value) -> None:
        self.fwd.delete(value)
        self.rev.delete(MIRROR_BASE - value)

    def query(self, a, b, meter=None) -> list:
        """Distinct colors of [a, b] (leftmost-occurrence order)."""
        ems, _ = self.fwd.query(a, b, meter=meter)
        hits = sorted((v, c) for v, c, p in ems if p < a)
        colors = [c for _, c in hits]
        deduped = self._col.dedup(colors)
        assert len(deduped) == len(colors), "prev-filter missed a duplicate"
        return deduped

    def k_leftmost(self, a, b, k, meter=None) -> list:
        return [c for _, c in self.fwd.k_leftmost(a, b, k, meter=meter)]

    def k_rightmost(self, a, b, k, meter=None) -> list:
        hits = self.rev.k_leftmost(MIRROR_BASE - b, MIRROR_BASE - a, k, meter=meter)
        return [c for _, c in hits]

    def k_leftmost_elements(self, a, b, k) -> list:
        return self.fwd.k_leftmost(a, b, k)

    def k_rightmost_elements(self, a, b, k) -> list:
        return [(MIRROR_BASE - v, c) for v, c in
                self.rev.k_leftmost(MIRROR_BASE - b, MIRROR_BASE - a, k)]
