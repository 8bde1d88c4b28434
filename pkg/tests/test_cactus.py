import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mincactus.cactus import (
    Cactus,
    HyperedgeCuts,
    alpha_beta,
    brittle,
    canonical,
    count_mincuts,
    enumerate_mincuts,
    force_together,
    from_json,
    hollow_3_stars,
    is_irredundant,
    make_irredundant,
    path,
    replace_hollow_3_stars,
    represented_bipartitions,
    ring,
    separates,
    star,
    to_dot,
    to_json,
    validate,
)
from mincactus.errors import InvalidSubset, UnknownNode


def singletons(k):
    return [[i] for i in range(k)]


def random_cactus(seed: int, max_nodes: int = 12) -> Cactus:
    """Random valid cactus with one terminal per node."""
    rng = random.Random(seed)
    N = 1
    tree, cycles, hypers = [], [], []
    while N < max_nodes:
        at = rng.randrange(N)
        kind = rng.choice("tch")
        room = max_nodes - N
        if kind == "t" or room < 2:
            tree.append((at, N))
            N += 1
        elif kind == "c":
            k = rng.randint(2, min(4, room))
            cycles.append([at] + list(range(N, N + k)))
            N += k
        else:
            k = rng.randint(2, min(3, room))
            hypers.append([at] + list(range(N, N + k)))
            N += k
        if rng.random() < 0.15:
            break
    return Cactus.make(1, singletons(N), tree, cycles, hypers)


class TestValidate:
    def test_valid_examples(self):
        assert validate(ring(2, singletons(6)), strict=True) == []
        assert validate(star(2, singletons(4)), strict=True) == []

    def test_two_cycle_rejected(self):
        c = Cactus(2, (frozenset([0]), frozenset([1])), cycles=((0, 1),))
        assert any("shorter than 3" in p for p in validate(c))

    def test_structural_problems(self):
        twice = Cactus(1, (frozenset([0]), frozenset([0])), tree_edges=((0, 1),))
        assert any("terminal 0" in p for p in validate(twice))
        loop = Cactus(1, tuple(frozenset([i]) for i in range(3)), tree_edges=((0, 1), (1, 2), (0, 2)))
        assert any("not a cactus" in p for p in validate(loop))
        apart = Cactus(1, tuple(frozenset([i]) for i in range(4)), tree_edges=((0, 1), (2, 3)))
        assert any("not connected" in p for p in validate(apart))
        assert any("unmapped" in p for p in validate(path(1, singletons(2)), terminals=[0, 1, 2]))
        assert validate(Cactus(1, ())) == ["cactus has no nodes"]

    def test_strict_flags(self):
        hollow = Cactus.make(1, [[], [0], [1], [2]], [(0, 1), (0, 2), (0, 3)])
        assert hollow_3_stars(hollow) == [0]
        assert any("hollow" in p for p in validate(hollow, strict=True))
        redundant = Cactus.make(1, [[0], [], [1]], [(0, 1), (1, 2)])
        assert not is_irredundant(redundant)
        assert any("redundant" in p for p in validate(redundant, strict=True))


class TestEnumerate:
    def test_counts(self):
        assert len(list(enumerate_mincuts(path(1, singletons(3))))) == 2
        assert count_mincuts(ring(2, singletons(5))) == 10 == len(list(enumerate_mincuts(ring(2, singletons(5)))))
        assert len(list(enumerate_mincuts(brittle(1, singletons(4))))) == 7

    def test_grouped_hyperedge(self):
        cuts = list(enumerate_mincuts(brittle(1, singletons(6)), expand_limit=4))
        assert len(cuts) == 1 and isinstance(cuts[0], HyperedgeCuts)
        assert cuts[0].count() == 31 == len(set(cuts[0].expand()))

    @pytest.mark.parametrize("seed", range(40))
    def test_no_duplicates_and_weight_lambda(self, seed):
        c = random_cactus(seed)
        cuts = list(enumerate_mincuts(c))
        assert len(cuts) == len(set(cuts)) == count_mincuts(c)
        from mincactus.cactus import cactus_cut_weight2

        for side in cuts:
            assert 0 not in side and cactus_cut_weight2(c, side) == 2


class TestSeparates:
    def test_star(self):
        s = star(3, singletons(4))
        assert separates(s, [0])
        assert not separates(s, [0, 1])

    def test_cycle_arcs(self):
        r = ring(2, singletons(6))
        assert separates(r, [1, 2, 3])
        assert not separates(r, [1, 3])

    def test_invalid(self):
        with pytest.raises(InvalidSubset):
            separates(ring(2, singletons(3)), [])
        with pytest.raises(InvalidSubset):
            separates(ring(2, singletons(3)), [0, 1, 2])

    @pytest.mark.parametrize("seed", range(25))
    def test_agrees_with_enumeration(self, seed):
        c = random_cactus(seed, max_nodes=9)
        rep = represented_bipartitions(c)
        terms = c.terminals
        for mask in range(1, 1 << (len(terms) - 1)):
            A = frozenset(terms[i + 1] for i in range(len(terms) - 1) if mask >> i & 1)
            assert separates(c, A) == (A in rep)


class TestAlphaBeta:
    def test_examples(self):
        assert alpha_beta(star(2, singletons(4))) == (2, 4)
        assert alpha_beta(brittle(1, singletons(4))) == (4, 4)
        assert alpha_beta(path(1, singletons(3))) == (2, 2)
        assert alpha_beta(ring(2, singletons(6))) == (2, 6)


class TestForceTogether:
    def test_c4_opposite_nodes(self):
        c = force_together(ring(2, singletons(4)), {0, 2})
        assert c.cycles == () and len(c.tree_edges) == 2 and count_mincuts(c) == 2

    def test_single_node_identity(self):
        c = ring(2, singletons(4))
        assert force_together(c, {1}) == c

    def test_brittle_loses_rank(self):
        c = force_together(brittle(1, singletons(4)), {0, 1})
        assert [len(h) for h in c.hyperedges] == [3]

    def test_unknown_node(self):
        with pytest.raises(UnknownNode):
            force_together(ring(2, singletons(4)), {0, 9})

    @given(st.integers(0, 10_000), st.data())
    def test_keeps_exactly_the_non_separating_cuts(self, seed, data):
        c = random_cactus(seed)
        S = data.draw(st.sets(st.integers(0, c.num_nodes - 1), min_size=1, max_size=4))
        labels = {t for i in S for t in c.nodes[i]}
        forced = force_together(c, S)
        assert validate(forced) == []
        t0 = c.terminals[0]
        universe = frozenset(c.terminals)
        want = set()
        for side in represented_bipartitions(c):
            if labels <= side or not labels & side:
                want.add(side)
        got = {universe - A if t0 in A else A for A in represented_bipartitions(forced)}
        assert got == want


class TestNormalisation:
    def test_hollow_star_becomes_triangle(self):
        c = replace_hollow_3_stars(Cactus.make(2, [[], [0], [1], [2]], [(0, 1), (0, 2), (0, 3)]))
        assert c.tree_edges == () and c.cycles == ((0, 1, 2),)
        assert star(2, singletons(3)) == c

    def test_make_irredundant_keeps_bipartitions(self):
        # two empty cycle junctions on one triangle: the edge between them is redundant
        c = Cactus.make(2, [[0], [1], [], [2], [], [3], [4]], cycles=[[0, 1, 2], [2, 3, 4], [4, 5, 6]])
        assert not is_irredundant(c)
        d = make_irredundant(c)
        assert is_irredundant(d) and represented_bipartitions(d) == represented_bipartitions(c)

    def test_canonical_orders_by_terminal(self):
        c = Cactus.make(1, [[5], [], [2]], [(0, 1), (1, 2)])
        assert [sorted(x) for x in canonical(c).nodes] == [[2], [5], []]

    def test_make_rules(self):
        c = Cactus.make(1, [[0], None, [1], [2]], [(0, 2)], cycles=[[2, 3]], hyperedges=[[0, 3]])
        assert c.num_nodes == 3 and c.tree_edges == ((0, 1), (0, 2), (1, 2)) and c.cycles == ()


class TestSerialisation:
    @pytest.mark.parametrize("seed", range(10))
    def test_json_round_trip(self, seed):
        c = random_cactus(seed)
        assert from_json(to_json(c)) == c

    def test_schema(self):
        import json

        d = json.loads(to_json(ring(2, singletons(3))))
        assert set(d) == {"lambda", "nodes", "tree_edges", "cycles", "hyperedges"}
        assert d["nodes"][0] == {"id": 0, "terminals": [0]}

    def test_dot(self):
        text = to_dot(Cactus.make(2, [[0], [1], [2], [3]], [(2, 3)], cycles=[[0, 1, 2]], hyperedges=[]))
        assert text.startswith("graph cactus {") and "cluster_cycle0" in text and "n2 -- n3;" in text
        assert "h0" in to_dot(brittle(1, singletons(3)))
