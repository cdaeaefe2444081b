"""Command-line harness: dataset/workload generation, building, oracle
verification, benchmarking, and index-file round-trips.

Subcommands:
  generate   deterministic dataset (CSV `value,color_label`)
  build      build an index from a dataset (em: serialize with --out)
  verify     replay a workload on an index and the oracle in lockstep
  bench      per-query BenchRecords plus summary rows (JSON, schema 1)
  dump       print an index file header and check its round-trip

Workload files hold one operation per line: `I value color`, `D value`,
`Q a b`, `K a b k`; '#' starts a comment.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .core import (ColoredPoint, CostMeter, FastOracle, load_dataset,
                   normalize_input, save_dataset)
from .dynamic_index import DynamicIndex
from .em_index import EmIndex
from .slow_index import SlowIndex
from .static_index import StaticIndex

SCHEMA = 1
K_BUCKETS = (1, 4, 16, 64, 256)


def parse_workload(path) -> list:
    ops = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "I":
                    ops.append(("I", int(parts[1]), parts[2]))
                elif parts[0] == "D":
                    ops.append(("D", int(parts[1])))
                elif parts[0] == "Q":
                    ops.append(("Q", int(parts[1]), int(parts[2])))
                elif parts[0] == "K":
                    ops.append(("K", int(parts[1]), int(parts[2]), int(parts[3])))
                else:
                    raise ValueError(parts[0])
            except (IndexError, ValueError) as exc:
                raise SystemExit(f"{path}:{ln}: bad workload line: {line!r} ({exc})")
    return ops


def save_workload(path, ops) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for op in ops:
            fh.write(" ".join(str(x) for x in op) + "\n")


def random_queries(seed: int, count: int, universe: int) -> list:
    rng = random.Random(seed)
    ops = []
    for _ in range(count):
        a = rng.randrange(1, universe + 1)
        b = rng.randrange(a, universe + 1)
        ops.append(("Q", a, b))
    return ops


class Oracle:
    """Lockstep reference: a plain dict plus vectorized range scans."""

    def __init__(self, points):
        self.live = {p.value: p.color for p in points}
        self._fo = None

    def insert(self, value, color):
        self.live[value] = color
        self._fo = None

    def delete(self, value):
        del self.live[value]
        self._fo = None

    def _oracle(self) -> FastOracle:
        if self._fo is None:
            pts = [ColoredPoint(v, c) for v, c in sorted(self.live.items())]
            self._fo = FastOracle(pts)
        return self._fo

    def report(self, a, b):
        return self._oracle().report(a, b)

    def k_leftmost(self, a, b, k):
        return self._oracle().k_leftmost(a, b, k)


def build_index(kind: str, points, block_size: int):
    if kind == "static":
        return StaticIndex(points)
    if kind == "dynamic":
        return DynamicIndex(points)
    if kind == "slow":
        return SlowIndex(points)
    if kind == "em":
        return EmIndex.build(points, B=block_size)
    raise SystemExit(f"unknown index kind {kind!r}")


def _apply(index, kind, op, remap, corrupt_state=None):
    """Run one op; returns ('Q', colors) / ('K', colors) / (None, None)."""
    if op[0] == "I":
        if kind not in ("dynamic", "slow"):
            raise SystemExit(f"index {kind!r} does not support inserts")
        cid = remap.id_for(op[2])
        index.insert(op[1], cid)
        return None, None
    if op[0] == "D":
        if kind not in ("dynamic", "slow"):
            raise SystemExit(f"index {kind!r} does not support deletes")
        index.delete(op[1])
        return None, None
    if op[0] == "Q":
        got = index.query(op[1], op[2])
        if corrupt_state is not None and got:
            corrupt_state["n"] += 1
            if corrupt_state["n"] % 7 == 0:
                got = got[:-1]
        return "Q", got
    if op[0] == "K":
        if kind != "slow":
            raise SystemExit("K ops are only supported on the slow index")
        return "K", index.k_leftmost(op[1], op[2], op[3])
    raise SystemExit(f"bad op {op!r}")


def replay_diverges(points, remap_base, kind, block_size, ops, corrupt):
    """Replay ops from scratch; returns (index, op, got, want) or None."""
    remap = remap_base
    index = build_index(kind, points, block_size)
    oracle = Oracle(points)
    corrupt_state = {"n": 0} if corrupt else None
    for i, op in enumerate(ops):
        tag, got = _apply(index, kind, op, remap, corrupt_state)
        if op[0] == "I":
            oracle.insert(op[1], remap.forward[op[2]])
        elif op[0] == "D":
            oracle.delete(op[1])
        elif tag == "Q":
            want = oracle.report(op[1], op[2])
            if set(got) != want or len(got) != len(set(got)):
                return i, op, sorted(got), sorted(want)
        elif tag == "K":
            want = oracle.k_leftmost(op[1], op[2], op[3])
            if got != want:
                return i, op, got, want
    return None


# -- subcommands ----------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.n > args.u:
        raise SystemExit("need N <= U for distinct coordinates")
    if args.c < 1:
        raise SystemExit("need C >= 1")
    rng = random.Random(args.seed)
    values = sorted(rng.sample(range(1, args.u + 1), args.n))
    if args.skew == "zipf":
        weights = [1.0 / (i + 1) ** 1.5 for i in range(args.c)]
        labels = rng.choices([f"c{i}" for i in range(args.c)], weights, k=args.n)
    else:
        labels = [f"c{rng.randrange(args.c)}" for _ in range(args.n)]
    header = (f"seed={args.seed} N={args.n} U={args.u} C={args.c} "
              f"skew={args.skew}")
    save_dataset(args.out, zip(values, labels), header=header)
    print(f"wrote {args.n} points to {args.out}")
    return 0


def cmd_build(args) -> int:
    points, remap = normalize_input(load_dataset(args.dataset))
    t0 = time.perf_counter_ns()
    index = build_index(args.index, points, args.block_size)
    build_ns = time.perf_counter_ns() - t0
    info = {"schema": SCHEMA, "index": args.index, "n": len(points),
            "colors": len(remap), "build_ns": build_ns}
    if args.index == "em":
        info["block_size"] = args.block_size
        if args.out:
            index.save(args.out)
            info["out"] = str(args.out)
    print(json.dumps(info))
    return 0


def cmd_verify(args) -> int:
    points, remap = normalize_input(load_dataset(args.dataset))
    if args.workload:
        ops = parse_workload(args.workload)
    else:
        universe = max((p.value for p in points), default=100) + 10
        ops = random_queries(args.seed, args.queries, universe)
    res = replay_diverges(points, remap, args.index, args.block_size, ops,
                          args.corrupt)
    if res is None:
        print(f"verify: PASS ({len(ops)} ops, index={args.index})")
        return 0
    i, op, got, want = res
    # minimize: shortest failing prefix via bisection (deterministic replay)
    lo, hi = 1, i + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if replay_diverges(points, remap, args.index, args.block_size,
                           ops[:mid], args.corrupt) is not None:
            hi = mid
        else:
            lo = mid + 1
    prefix = ops[:lo]
    print(f"verify: FAIL at op {i}: {op}")
    print(f"  got:  {got}")
    print(f"  want: {want}")
    print(f"  minimized reproducer: {lo} ops")
    if args.out:
        save_workload(args.out, prefix)
        print(f"  reproducer written to {args.out}")
    else:
        for o in prefix[-10:]:
            print("  " + " ".join(str(x) for x in o))
    return 1


def cmd_bench(args) -> int:
    points, remap = normalize_input(load_dataset(args.dataset))
    if args.workload:
        ops = parse_workload(args.workload)
    else:
        universe = max((p.value for p in points), default=100) + 10
        ops = random_queries(args.seed, args.queries, universe)
    index = build_index(args.index, points, args.block_size)
    remap_live = remap
    records = []
    meter = CostMeter()
    for op in ops:
        if op[0] in ("I", "D"):
            _apply(index, args.index, op, remap_live)
            continue
        meter.reset()
        t0 = time.perf_counter_ns()
        if op[0] == "Q":
            got = index.query(op[1], op[2], meter=meter)
        else:
            got = index.k_leftmost(op[1], op[2], op[3], meter=meter)
        wall = time.perf_counter_ns() - t0
        rec = {"kind": args.index, "n": len(points), "op": op[0],
               "a": op[1], "b": op[2], "k": len(got),
               "touches": meter.touches, "locate_ops": meter.locate_ops,
               "block_reads": meter.block_reads, "wall_ns": wall}
        if args.index == "em":
            rec["B"] = args.block_size
        records.append(rec)

    summary = {"buckets": {}}
    for bucket in K_BUCKETS:
        lo = 1 if bucket == 1 else bucket // 2 + 1
        hi = bucket * 2
        rows = [r for r in records if lo <= max(r["k"], 1) <= hi]
        if not rows:
            continue
        if args.index == "em":
            vals = sorted(r["block_reads"] / (1 + r["k"] / args.block_size)
                          for r in rows)
        else:
            vals = sorted(r["touches"] / (r["k"] + 1) for r in rows)
        summary["buckets"][str(bucket)] = {
            "queries": len(rows),
            "median_cost_ratio": vals[len(vals) // 2],
        }
    out = {"schema": SCHEMA, "index": args.index, "n": len(points),
           "records": records, "summary": summary}
    text = json.dumps(out, indent=None)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"bench: {len(records)} query records -> {args.out}")
    else:
        print(text)
    return 0


def cmd_dump(args) -> int:
    with open(args.index_file, "rb") as fh:
        data = fh.read()
    index = EmIndex.from_bytes(data)
    again = index.to_bytes()
    ok = again == data
    info = {"schema": SCHEMA, "magic": "CRR1", "n": index.n, "B": index.B,
            "colors": index.ncolors, "blocks": len(index.store.blocks),
            "leaves": index.nleaves, "roundtrip_identical": ok}
    print(json.dumps(info))
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(again)
    return 0 if ok else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="colorrange", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="write a deterministic dataset")
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--u", type=int, required=True)
    g.add_argument("--c", type=int, required=True)
    g.add_argument("--skew", choices=("uniform", "zipf"), default="uniform")
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_generate)

    def common(p, queries_default=1000):
        p.add_argument("--dataset", required=True)
        p.add_argument("--index", choices=("static", "dynamic", "slow", "em"),
                       default="static")
        p.add_argument("--block-size", type=int, default=8)
        p.add_argument("--workload")
        p.add_argument("--queries", type=int, default=queries_default)
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--out")

    b = sub.add_parser("build", help="build an index (em: saves with --out)")
    b.add_argument("--dataset", required=True)
    b.add_argument("--index", choices=("static", "dynamic", "slow", "em"),
                   default="static")
    b.add_argument("--block-size", type=int, default=8)
    b.add_argument("--out")
    b.set_defaults(fn=cmd_build)

    v = sub.add_parser("verify", help="lockstep replay against the oracle")
    common(v)
    v.add_argument("--corrupt", action="store_true",
                   help="inject a fault to demonstrate divergence reporting")
    v.set_defaults(fn=cmd_verify)

    be = sub.add_parser("bench", help="meter queries, emit JSON records")
    common(be)
    be.set_defaults(fn=cmd_bench)

    d = sub.add_parser("dump", help="inspect an em index file")
    d.add_argument("--index-file", required=True)
    d.add_argument("--out")
    d.set_defaults(fn=cmd_dump)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
