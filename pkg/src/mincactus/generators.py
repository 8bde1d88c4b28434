"""Seeded random instances for tests and experiments."""

from __future__ import annotations

import random
from itertools import combinations, permutations

from .graph import Hypergraph, WeightedGraph, WeightedHypergraph, build_graph, build_hypergraph


def random_connected_graph(rng: random.Random, n: int, m: int, max_weight: int) -> WeightedGraph:
    """Random spanning tree plus extra random edges (parallel edges merge)."""
    order = list(range(n))
    rng.shuffle(order)
    edges = [(order[i], order[rng.randrange(i)], rng.randint(1, max_weight)) for i in range(1, n)]
    while len(edges) < m:
        u, v = rng.sample(range(n), 2)
        edges.append((u, v, rng.randint(1, max_weight)))
    return build_graph(n, edges)


def random_hypergraph(
    rng: random.Random,
    n: int,
    m: int,
    max_rank: int,
    max_weight: int,
    connected: bool = True,
) -> WeightedHypergraph:
    """Random hyperedges of rank 2..max_rank; resampled until connected."""
    while True:
        edges = []
        for _ in range(m):
            r = rng.randint(2, min(max_rank, n))
            edges.append((rng.sample(range(n), r), rng.randint(1, max_weight)))
        h = build_hypergraph(n, edges)
        if not connected or h.is_connected:
            return h


def connected_hypergraph(rng: random.Random, n: int, m: int, max_rank: int, max_weight: int) -> WeightedHypergraph:
    """Like :func:`random_hypergraph` but built to be connected in one pass.

    The first hyperedges chain fresh vertices onto the covered ones; the rest
    are uniform.  Fails if ``m`` hyperedges of rank ``max_rank`` cannot span n.
    """
    order = list(range(n))
    rng.shuffle(order)
    covered = [order[0]]
    edges = []
    i = 1
    while i < n:
        r = rng.randint(2, min(max_rank, n))
        fresh = order[i : i + r - 1]
        i += len(fresh)
        old = rng.sample(covered, min(len(covered), r - len(fresh)))
        covered += fresh
        edges.append((old + fresh, rng.randint(1, max_weight)))
    if len(edges) > m:
        raise ValueError(f"cannot span {n} vertices with {m} hyperedges of rank ≤ {max_rank}")
    while len(edges) < m:
        r = rng.randint(2, min(max_rank, n))
        edges.append((rng.sample(range(n), r), rng.randint(1, max_weight)))
    return build_hypergraph(n, edges)


def cactus_like_graph(rng: random.Random, n: int, hyper: bool = False, extra: int = 3) -> Hypergraph:
    """Glue of cycles, paths and (optionally) hyperedges: many tight cuts.

    Path edges and hyperedges get weight 2 so that every glued piece is as
    tight as a unit cycle.
    """
    edges: list[tuple[list[int], int]] = []
    verts = [0]
    nxt = 1
    while nxt < n:
        base = rng.choice(verts)
        kind = rng.random()
        k = min(rng.randint(1, 5), n - nxt)
        new = list(range(nxt, nxt + k))
        nxt += k
        verts += new
        if kind < 0.5 and k >= 2:
            ring = [base] + new
            edges += [([ring[i], ring[(i + 1) % len(ring)]], 1) for i in range(len(ring))]
        elif hyper and kind < 0.8:
            edges.append(([base] + new, 2))
        else:
            prev = base
            for v in new:
                edges.append(([prev, v], 2))
                prev = v
    for _ in range(rng.randint(0, extra)):
        u, v = rng.sample(range(n), 2)
        edges.append(([u, v], rng.randint(1, 2)))
    if hyper:
        return build_hypergraph(n, edges)
    return build_graph(n, ((a, b, w) for (a, b), w in edges))


def random_terminals(rng: random.Random, n: int, max_size: int, min_size: int = 2) -> list[int]:
    return sorted(rng.sample(range(n), rng.randint(min_size, min(max_size, n))))


def _canonical_edge_set(n: int, edges: tuple[tuple[int, ...], ...]) -> tuple:
    best = None
    for perm in permutations(range(n)):
        key = tuple(sorted(tuple(sorted(perm[v] for v in e)) for e in edges))
        if best is None or key < best:
            best = key
    return best


def small_unit_hypergraphs(
    max_n: int = 6,
    max_m: int = 5,
    max_rank: int = 4,
    exhaustive_n: int = 4,
    samples_per_n: int = 950,
    seed: int = 0,
) -> list[WeightedHypergraph]:
    """Connected simple unit-weight hypergraphs.

    Every isomorphism class is listed for n ≤ ``exhaustive_n``; larger n are
    represented by ``samples_per_n`` distinct seeded random classes each.
    """
    out: list[WeightedHypergraph] = []
    for n in range(2, max_n + 1):
        pool = [e for r in range(2, min(max_rank, n) + 1) for e in combinations(range(n), r)]
        seen: set = set()
        if n <= exhaustive_n:
            candidates = (c for m in range(1, max_m + 1) for c in combinations(pool, m))
        else:
            rng = random.Random(seed * 1000 + n)

            def sampled():
                tries = 0
                while len(seen) < samples_per_n and tries < 50 * samples_per_n:
                    tries += 1
                    yield tuple(sorted(rng.sample(pool, rng.randint(1, max_m))))

            candidates = sampled()
        for edges in candidates:
            h = build_hypergraph(n, [(e, 1) for e in edges])
            if not h.is_connected:
                continue
            key = _canonical_edge_set(n, edges)
            if key in seen:
                continue
            seen.add(key)
            out.append(h)
    return out


def insertion_trace(rng: random.Random, n: int, length: int, max_rank: int = 4) -> list[tuple[int, ...]]:
    """Random unit hyperedge insertions, mostly rank 2."""
    out = []
    for _ in range(length):
        r = min(n, rng.choice([2, 2, 2, 3, max_rank]))
        out.append(tuple(sorted(rng.sample(range(n), r))))
    return out


def steiner_graph_pool(count: int, seed: int = 0, max_n: int = 12, max_terminals: int = 7, max_weight: int = 6) -> list[tuple[WeightedGraph, list[int]]]:
    """Connected graphs with terminal sets: half uniform, half cut-rich.

    The cut-rich half uses small weights and glued cycles so that many
    terminal bipartitions are tight.
    """
    out = []
    for i in range(count):
        rng = random.Random(seed * 100_003 + i)
        n = rng.randint(4, max_n)
        kind = i % 4
        if kind == 0:
            g = random_connected_graph(rng, n, rng.randint(n - 1, 3 * n), max_weight)
        elif kind == 1:
            g = random_connected_graph(rng, n, rng.randint(n - 1, 2 * n), min(2, max_weight))
        else:
            g = cactus_like_graph(rng, n, hyper=False)
        out.append((g, random_terminals(rng, n, max_terminals)))
    return out


def steiner_hypergraph_pool(
    count: int,
    seed: int = 0,
    max_n: int = 10,
    max_m: int = 8,
    max_rank: int = 5,
    max_terminals: int = 6,
    max_weight: int = 4,
) -> list[tuple[WeightedHypergraph, list[int]]]:
    """Connected hypergraphs with terminal sets; every third one has unit weights."""
    out = []
    for i in range(count):
        rng = random.Random(seed * 100_019 + i)
        while True:
            n = rng.randint(3, max_n)
            try:
                h = connected_hypergraph(rng, n, rng.randint(1, max_m), max_rank, 1 if i % 3 == 0 else max_weight)
                break
            except ValueError:
                continue
        out.append((h, random_terminals(rng, n, max_terminals)))
    return out
