"""Domain types, input normalization, prev-links, and brute-force oracles.

Every index in this package is tested against the oracles defined here; the
oracles are deliberately naive (linear scans over the point list) so they stay
independent of any indexing strategy.

Conventions used throughout the package:

- coordinates are integers >= 1; coordinate 0 is reserved as the prev-sentinel
  ("no earlier element of the same color"),
- colors are dense integer ids in [0, C) produced by `normalize_input`,
- a query range [a, b] is inclusive on both ends and requires a <= b.
"""

from __future__ import annotations

import bisect
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

PREV_SENTINEL = 0


class DuplicateCoordinate(ValueError):
    """The input contained the same coordinate twice (sets, not multisets)."""

    def __init__(self, value):
        super().__init__(f"duplicate coordinate {value}")
        self.value = value


class InvalidRange(ValueError):
    """Raised when a query range has a > b."""


class DuplicateX(ValueError):
    """Insertion of an x already present in a structure."""


class NotFound(KeyError):
    """Deletion of an x that is not present."""


class ColoredPoint(NamedTuple):
    value: int
    color: int


class Range(NamedTuple):
    a: int
    b: int


def make_range(a: int, b: int) -> Range:
    if a > b:
        raise InvalidRange(f"empty range [{a}, {b}]")
    return Range(a, b)


class ColorRemap:
    """Bijection between external color labels and dense ids in [0, C)."""

    def __init__(self):
        self.forward: dict = {}
        self.reverse: list = []

    def id_for(self, label) -> int:
        cid = self.forward.get(label)
        if cid is None:
            cid = len(self.reverse)
            self.forward[label] = cid
            self.reverse.append(label)
        return cid

    def label_for(self, cid: int):
        return self.reverse[cid]

    def __len__(self) -> int:
        return len(self.reverse)

    def __eq__(self, other) -> bool:
        return isinstance(other, ColorRemap) and self.reverse == other.reverse

    def __repr__(self) -> str:
        return f"ColorRemap({self.forward!r})"


class CostMeter:
    """Monotone operation counters, reset between queries.

    touches      elements/nodes examined during reporting phases
    locate_ops   predecessor/navigation steps (for the external-memory index:
                 locate-phase block transfers)
    block_reads  reporting-phase block transfers (external-memory index only)
    """

    __slots__ = ("touches", "locate_ops", "block_reads")

    def __init__(self):
        self.touches = 0
        self.locate_ops = 0
        self.block_reads = 0

    def reset(self) -> None:
        self.touches = 0
        self.locate_ops = 0
        self.block_reads = 0

    def snapshot(self) -> dict:
        return {
            "touches": self.touches,
            "locate_ops": self.locate_ops,
            "block_reads": self.block_reads,
        }

    def __repr__(self) -> str:
        return (f"CostMeter(touches={self.touches}, locate_ops={self.locate_ops}, "
                f"block_reads={self.block_reads})")


class ColArray:
    """Bit array over color ids plus a touched-list for O(answer) reset."""

    __slots__ = ("bits", "touched")

    def __init__(self, ncolors: int):
        self.bits = bytearray(ncolors)
        self.touched: list = []

    def grow(self, ncolors: int) -> None:
        if ncolors > len(self.bits):
            self.bits.extend(b"\x00" * (ncolors - len(self.bits)))

    def mark(self, color: int) -> bool:
        """Mark a color; True if it was unseen (first occurrence)."""
        if self.bits[color]:
            return False
        self.bits[color] = 1
        self.touched.append(color)
        return True

    def reset(self) -> None:
        for c in self.touched:
            self.bits[c] = 0
        self.touched.clear()

    def dedup(self, colors: Iterable[int]) -> list:
        """First occurrences of `colors`, order preserved; array left clean."""
        out = []
        for c in colors:
            if not self.bits[c]:
                self.bits[c] = 1
                self.touched.append(c)
                out.append(c)
        self.reset()
        return out


def normalize_input(pairs: Iterable[tuple]) -> tuple[list[ColoredPoint], ColorRemap]:
    """Sort by coordinate and remap colors densely by first occurrence.

    `pairs` is an iterable of (coordinate, color_label). Coordinates must be
    distinct integers >= 1 (0 is the prev-sentinel).
    """
    remap = ColorRemap()
    pts = []
    for value, label in pairs:
        v = int(value)
        if v < 1:
            raise ValueError(f"coordinate {v} < 1 (0 is reserved)")
        pts.append(ColoredPoint(v, remap.id_for(label)))
    pts.sort()
    for i in range(1, len(pts)):
        if pts[i - 1].value == pts[i].value:
            raise DuplicateCoordinate(pts[i].value)
    return pts, remap


def compute_prev(points: Sequence[ColoredPoint]) -> list[int]:
    """prev(e) per point: the largest same-color coordinate < e, else 0.

    `points` must be sorted ascending by value with distinct values.
    """
    last: dict = {}
    out = []
    for v, c in points:
        out.append(last.get(c, PREV_SENTINEL))
        last[c] = v
    return out


def oracle_report(points: Sequence[ColoredPoint], q: Range) -> set:
    """Distinct colors of points with a <= value <= b, by linear scan."""
    a, b = q
    return {c for v, c in points if a <= v <= b}


def oracle_k_leftmost(points: Sequence[ColoredPoint], q: Range, k: int) -> list:
    """First k distinct colors scanning [a, b] left-to-right (sorted input)."""
    a, b = q
    out: list = []
    seen = set()
    for v, c in points:
        if v < a:
            continue
        if v > b or len(out) >= k:
            break
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def oracle_k_rightmost(points: Sequence[ColoredPoint], q: Range, k: int) -> list:
    """First k distinct colors scanning [a, b] right-to-left (sorted input)."""
    a, b = q
    out: list = []
    seen = set()
    for v, c in reversed(points):
        if v > b:
            continue
        if v < a or len(out) >= k:
            break
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


class FastOracle:
    """numpy-vectorized equivalent of the scan oracles, for large test runs.

    Semantically identical to oracle_report / oracle_k_leftmost; used where a
    pure-Python scan would dominate the runtime of randomized suites.
    """

    def __init__(self, points: Sequence[ColoredPoint]):
        self.values = np.fromiter((p.value for p in points), dtype=np.int64,
                                  count=len(points))
        self.colors = np.fromiter((p.color for p in points), dtype=np.int64,
                                  count=len(points))

    def window(self, a: int, b: int) -> tuple[int, int]:
        lo = int(np.searchsorted(self.values, a, side="left"))
        hi = int(np.searchsorted(self.values, b, side="right"))
        return lo, hi

    def report(self, a: int, b: int) -> set:
        lo, hi = self.window(a, b)
        if lo >= hi:
            return set()
        return set(np.unique(self.colors[lo:hi]).tolist())

    def count_in(self, a: int, b: int) -> int:
        lo, hi = self.window(a, b)
        return hi - lo

    def k_leftmost(self, a: int, b: int, k: int) -> list:
        lo, hi = self.window(a, b)
        out: list = []
        seen = set()
        for c in self.colors[lo:hi].tolist():
            if len(out) >= k:
                break
            if c not in seen:
                seen.add(c)
                out.append(c)
        return out

    def k_rightmost(self, a: int, b: int, k: int) -> list:
        lo, hi = self.window(a, b)
        out: list = []
        seen = set()
        for c in self.colors[lo:hi][::-1].tolist():
            if len(out) >= k:
                break
            if c not in seen:
                seen.add(c)
                out.append(c)
        return out


def succ_index(values: Sequence[int], a: int) -> int:
    """Index of the smallest value >= a in a sorted list (== len if none)."""
    return bisect.bisect_left(values, a)


def load_dataset(path) -> list[tuple]:
    """Read `value,color_label` CSV lines; '#' starts a comment."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            value, label = line.split(",", 1)
            rows.append((int(value), label.strip()))
    return rows


def save_dataset(path, rows: Iterable[tuple], header: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for value, label in rows:
            fh.write(f"{value},{label}\n")
