import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mincactus.cactus import Cactus, brittle, canonical, path, ring, star, validate
from mincactus.errors import NotAGraph
from mincactus.generators import cactus_like_graph, steiner_hypergraph_pool
from mincactus.graph import build_hypergraph
from mincactus.hypercactus import (
    build_hypercactus,
    check_never_splits_hyperedge,
    compute_steiner_hypercactus,
    good_split_collection_hyper,
    graph_pipeline_cactus,
    merge_hypercactus,
    star_or_brittle_cactus,
)
from mincactus.io import read_instance
from mincactus.oracle import brute_bipartition_table, check_equivalence
from mincactus.steiner import CactusConfig, induced_decomposition

from .strategies import hypergraphs, terminal_sets

FIX = "tests/fixtures/"


def fixture(name):
    return read_instance(FIX + name).graph()


def oracle_ok(h, c, T=None):
    return check_equivalence(c, brute_bipartition_table(h, T)).ok


def components_without(c: Cactus, block: int) -> int:
    """Connected components of the cactus skeleton once one block is deleted."""
    parent = list(range(c.num_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b, (_, members) in enumerate(c.blocks()):
        if b == block:
            continue
        for a in members[1:]:
            parent[find(a)] = find(members[0])
    return len({find(x) for x in range(c.num_nodes)})


class TestExamples:
    def test_single_hyperedge_is_brittle(self):
        c = compute_steiner_hypercactus(fixture("brittle4.hgraph"))
        assert c == brittle(1, [[i] for i in range(4)])

    def test_two_brittles_share_a_node(self):
        h = fixture("twobrittles.hgraph")
        c = compute_steiner_hypercactus(h)
        assert len(c.hyperedges) == 2 and c.hyperedges[0][0] == c.hyperedges[1][0] == c.phi[0]
        assert oracle_ok(h, c)

    def test_brittle_with_pendant_and_triangle(self):
        h = fixture("mixed.hgraph")
        c = compute_steiner_hypercactus(h)
        assert oracle_ok(h, c) and validate(c, strict=True) == []

    def test_brittle_on_a_cycle(self):
        # unit 6-cycle with a weight-2 hyperedge hanging three vertices off vertex 0
        h = build_hypergraph(9, [([i, (i + 1) % 6], 1) for i in range(6)] + [([6, 7, 8, 0], 2)])
        c = compute_steiner_hypercactus(h)
        assert oracle_ok(h, c)
        assert len(c.cycles) == 1 and len(c.hyperedges) == 1

    def test_brittle_with_pendant_edge(self):
        h = build_hypergraph(5, [([0, 1, 2, 3], 1), ([3, 4], 1)])
        c = compute_steiner_hypercactus(h)
        assert oracle_ok(h, c)
        assert len(c.hyperedges) == 1 and c.tree_edges == ((c.phi[3], c.phi[4]),)

    def test_rank_two_matches_graph_pipeline(self):
        rng = random.Random(3)
        for _ in range(20):
            g = cactus_like_graph(rng, rng.randint(4, 11))
            h = build_hypergraph(g.n, [(e, w) for e, w in g.edges])
            assert compute_steiner_hypercactus(h) == graph_pipeline_cactus(h)

    def test_graph_pipeline_rejects_hyperedges(self):
        with pytest.raises(NotAGraph):
            graph_pipeline_cactus(fixture("brittle4.hgraph"))

    def test_terminal_subset(self):
        h = fixture("twobrittles.hgraph")
        c = compute_steiner_hypercactus(h, [1, 2, 4, 5])
        assert oracle_ok(h, c, [1, 2, 4, 5])
        assert canonical(c) == c and set(c.terminals) == {1, 2, 4, 5}


class TestStarOrBrittle:
    def test_brittle(self):
        h = fixture("brittle4.hgraph")
        assert star_or_brittle_cactus(h, range(4)) == brittle(1, [[i] for i in range(4)])

    def test_star(self):
        h = build_hypergraph(5, [([4, i], 1) for i in range(4)])
        assert star_or_brittle_cactus(h, range(4)) == star(1, [[i] for i in range(4)])

    def test_three_terminals_never_brittle(self):
        h = build_hypergraph(3, [([0, 1, 2], 1)])
        assert star_or_brittle_cactus(h, range(3)) == star(1, [[0], [1], [2]])


class TestSplitsAndMerge:
    def test_split_never_cuts_the_brittle(self):
        h = fixture("twobrittles.hgraph")
        truth = compute_steiner_hypercactus(h)
        S = good_split_collection_hyper(h, range(7), 1, CactusConfig(seed=0))
        assert S and check_never_splits_hyperedge(S, truth)

    def test_checker_flags_a_crossing_split(self):
        truth = brittle(1, [[i] for i in range(4)])
        assert not check_never_splits_hyperedge([{0, 1}], truth)
        assert check_never_splits_hyperedge([{0}, {0, 1, 2}], truth)

    def test_checker_ignores_mixed_members(self):
        # member 0 carries terminals on both sides, so the split runs through it
        truth = Cactus.make(1, [[0, 9], [1], [2], [3]], hyperedges=[[0, 1, 2, 3]])
        assert check_never_splits_hyperedge([{0, 1, 2}], truth)
        assert not check_never_splits_hyperedge([{0, 9, 1}], truth)

    def test_merge_two_brittles(self):
        h = fixture("twobrittles.hgraph")
        T = list(range(7))
        dec = induced_decomposition(h, T, [frozenset({1, 2, 3})])
        subs = [compute_steiner_hypercactus(sp.graph, sp.terminals) for sp in dec.subproblems]
        assert all(len(s.hyperedges) == 1 for s in subs)
        merged = merge_hypercactus(h, T, dec, subs)
        assert canonical(merged) == compute_steiner_hypercactus(h)

    def test_trace_splits_respect_truth(self):
        for h, T in steiner_hypergraph_pool(40, seed=7):
            c, trace = build_hypercactus(h, T, CactusConfig(seed=1))
            assert check_never_splits_hyperedge(trace, c)


class TestProperties:
    @settings(max_examples=40)
    @given(hypergraphs(min_n=2, max_n=8, max_rank=5, max_w=3), st.data())
    def test_oracle_equivalence(self, h, data):
        T = data.draw(terminal_sets(h.n))
        c = compute_steiner_hypercactus(h, T, CactusConfig(seed=data.draw(st.integers(0, 99)), verify_splits=True))
        assert oracle_ok(h, c, T)
        assert validate(c, [h.labels[t] for t in T], strict=True) == []

    @settings(max_examples=40)
    @given(hypergraphs(min_n=3, max_n=8, max_rank=5, max_w=2))
    def test_hyperedge_removal_leaves_rank_components(self, h):
        c = compute_steiner_hypercactus(h)
        for b, (kind, members) in enumerate(c.blocks()):
            if kind == "hyper":
                assert components_without(c, b) == len(members)
