"""Equivalence, recursion depth and flow-call statistics on the seeded pools.

    python scripts/steiner_sweep.py --graphs 200 --hypergraphs 150 --reps 48

Writes one JSON record per run to results/steiner_sweep.jsonl and prints a
summary, including the flow constant c1 = max flows / (log2(n)^3 * levels).
"""

from __future__ import annotations

import argparse
import json
import math
import time
from pathlib import Path

from mincactus.cactus import validate
from mincactus.generators import steiner_graph_pool, steiner_hypergraph_pool
from mincactus.hypercactus import build_hypercactus, check_never_splits_hyperedge
from mincactus.oracle import brute_bipartition_table, check_equivalence
from mincactus.steiner import CactusConfig, build_cactus


def depth_bound(t: int) -> int:
    return math.ceil(math.log(t) / math.log(4 / 3)) + 2


def flow_ratio(trace, n: int) -> float:
    levels = trace.max_depth + 1
    return trace.flow_calls / (max(math.log2(n), 1.0) ** 3 * levels)


def sweep(pool, build, reps: float, seed: int, hyper: bool) -> list[dict]:
    rows = []
    for i, (g, T) in enumerate(pool):
        start = time.perf_counter()
        c, trace = build(g, T, CactusConfig(seed=seed + i, reps=reps))
        elapsed = time.perf_counter() - start
        report = check_equivalence(c, brute_bipartition_table(g, T))
        rows.append(
            {
                "kind": "hyper" if hyper else "graph",
                "index": i,
                "n": g.n,
                "terminals": len(T),
                "violations": report.violations,
                "valid": not validate(c, strict=True),
                "never_splits": check_never_splits_hyperedge(trace, c),
                "depth": trace.max_depth,
                "depth_bound": depth_bound(len(T)),
                "flows": trace.flow_calls,
                "level_flows": trace.level_flows,
                "flow_ratio": flow_ratio(trace, g.n),
                "fallbacks": trace.fallbacks,
                "seconds": elapsed,
            }
        )
    return rows


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--graphs", type=int, default=200)
    ap.add_argument("--hypergraphs", type=int, default=150)
    ap.add_argument("--reps", type=float, default=48.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pool-seed", type=int, default=0)
    ap.add_argument("--out", default="results/steiner_sweep.jsonl")
    args = ap.parse_args()

    rows = sweep(steiner_graph_pool(args.graphs, args.pool_seed), build_cactus, args.reps, args.seed, False)
    rows += sweep(steiner_hypergraph_pool(args.hypergraphs, args.pool_seed), build_hypercactus, args.reps, args.seed, True)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("".join(json.dumps(r) + "\n" for r in rows))

    for kind in ("graph", "hyper"):
        sub = [r for r in rows if r["kind"] == kind]
        if not sub:
            continue
        bad = sum(r["violations"] > 0 for r in sub)
        print(
            f"{kind:5s} runs={len(sub)} failing={bad} invalid={sum(not r['valid'] for r in sub)} "
            f"split-violations={sum(not r['never_splits'] for r in sub)} "
            f"depth>bound={sum(r['depth'] > r['depth_bound'] for r in sub)} max_depth={max(r['depth'] for r in sub)} "
            f"fallbacks={sum(r['fallbacks'] for r in sub)} "
            f"c1={max(r['flow_ratio'] for r in sub):.1f} seconds={sum(r['seconds'] for r in sub):.1f}"
        )


if __name__ == "__main__":
    main()
