"""Cactus and hypercactus structures.

A :class:`Cactus` is a connected structure of nodes joined by three kinds of
blocks: tree edges (weight λ), cycles (each edge weight λ/2) and hyperedges
(weight λ).  Weights are implied by the block kind and never stored.  Each
node carries a possibly empty set of terminal labels; the inverse of that
assignment is the terminal map φ.

The node/block incidence graph of a valid cactus is a tree.  Most queries
root that tree and work with per-subtree bitmasks: removing a block from the
tree leaves one component per member, and every minimum cut of the cactus is
a union of such components for a single block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import InvalidSubset, UnknownNode

TREE, CYCLE, HYPER = "tree", "cycle", "hyper"


def _canonical_ring(ring: Sequence[int]) -> tuple[int, ...]:
    i = ring.index(min(ring))
    r = list(ring[i:]) + list(ring[:i])
    if r[-1] < r[1]:
        r = [r[0]] + r[:0:-1]
    return tuple(r)


@dataclass(frozen=True)
class Cactus:
    lam: int
    nodes: tuple[frozenset, ...]
    tree_edges: tuple[tuple[int, int], ...] = ()
    cycles: tuple[tuple[int, ...], ...] = ()
    hyperedges: tuple[tuple[int, ...], ...] = ()

    @staticmethod
    def make(
        lam: int,
        nodes: Sequence[Iterable[Hashable] | None],
        tree_edges: Iterable[Sequence[int]] = (),
        cycles: Iterable[Sequence[int]] = (),
        hyperedges: Iterable[Sequence[int]] = (),
    ) -> "Cactus":
        """Normalize and renumber.

        ``None`` entries in ``nodes`` are deleted.  Cycles of length two become
        tree edges, hyperedges of rank two become tree edges, and shorter
        blocks vanish.  Blocks are put in a canonical order.
        """
        alive = [i for i, x in enumerate(nodes) if x is not None]
        remap = {old: new for new, old in enumerate(alive)}
        new_nodes = tuple(frozenset(nodes[i]) for i in alive)
        tree: list[tuple[int, int]] = []
        rings: list[tuple[int, ...]] = []
        hypers: list[tuple[int, ...]] = []

        def add_pair(a: int, b: int) -> None:
            if a != b:
                tree.append((min(a, b), max(a, b)))

        for u, v in tree_edges:
            add_pair(remap[u], remap[v])
        for ring in cycles:
            r = [remap[x] for x in ring]
            if len(r) == 2:
                add_pair(*r)
            elif len(r) >= 3:
                rings.append(_canonical_ring(r))
        for members in hyperedges:
            mem = sorted({remap[x] for x in members})
            if len(mem) == 2:
                add_pair(*mem)
            elif len(mem) >= 3:
                hypers.append(tuple(mem))
        return Cactus(lam, new_nodes, tuple(sorted(tree)), tuple(sorted(rings)), tuple(sorted(hypers)))

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @cached_property
    def phi(self) -> dict[Hashable, int]:
        return {t: i for i, ts in enumerate(self.nodes) for t in ts}

    @cached_property
    def terminals(self) -> tuple[Hashable, ...]:
        return tuple(sorted(self.phi))

    def blocks(self) -> list[tuple[str, tuple[int, ...]]]:
        out = [(TREE, e) for e in self.tree_edges]
        out += [(CYCLE, r) for r in self.cycles]
        out += [(HYPER, h) for h in self.hyperedges]
        return out

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in self.nodes]
        for b, (_, members) in enumerate(self.blocks()):
            for x in members:
                inc[x].append(b)
        return tuple(tuple(x) for x in inc)

    def block_degree(self, node: int) -> int:
        """Number of blocks at ``node``; a cycle counts once."""
        return len(self.incidence[node])

    @cached_property
    def _tree(self) -> "_BlockTree":
        return _BlockTree(self)


class _BlockTree:
    """Rooted node/block incidence tree with subtree node and terminal masks."""

    def __init__(self, c: Cactus, root: int = 0):
        self.c = c
        self.blocks = c.blocks()
        N = len(c.nodes)
        self.N = N
        self.tindex = {t: i for i, t in enumerate(c.terminals)}
        self.full = (1 << N) - 1
        self.tfull = (1 << len(self.tindex)) - 1
        node_t = [0] * N
        for i, ts in enumerate(c.nodes):
            for t in ts:
                node_t[i] |= 1 << self.tindex[t]
        self.node_t = node_t
        # tree vertices: nodes 0..N-1, blocks N..N+B-1
        parent = [-1] * (N + len(self.blocks))
        order = [root]
        seen = [False] * (N + len(self.blocks))
        seen[root] = True
        i = 0
        while i < len(order):
            x = order[i]
            i += 1
            if x < N:
                nbrs = [N + b for b in c.incidence[x]]
            else:
                nbrs = list(self.blocks[x - N][1])
            for y in nbrs:
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    order.append(y)
        self.parent = parent
        self.order = order
        sub = [0] * len(parent)
        tsub = [0] * len(parent)
        for x in range(N):
            sub[x] = 1 << x
            tsub[x] = node_t[x]
        for x in reversed(order):
            p = parent[x]
            if p >= 0:
                sub[p] |= sub[x]
                tsub[p] |= tsub[x]
        self.sub = sub
        self.tsub = tsub

    def hang(self, member: int, b: int) -> tuple[int, int]:
        """(node mask, terminal mask) of member's side once block b is removed."""
        x = self.N + b
        if self.parent[x] == member:
            return self.full ^ self.sub[x], self.tfull ^ self.tsub[x]
        return self.sub[member], self.tsub[member]

    def hangs(self, b: int) -> list[tuple[int, int]]:
        return [self.hang(m, b) for m in self.blocks[b][1]]


@dataclass(frozen=True)
class HyperedgeCuts:
    """All 2^(r-1) - 1 groupings of a large hyperedge's components."""

    block: int
    components: tuple[frozenset[int], ...]

    def count(self) -> int:
        return (1 << (len(self.components) - 1)) - 1

    def expand(self) -> Iterator[frozenset[int]]:
        rest = self.components[1:]
        for mask in range(1, 1 << len(rest)):
            yield frozenset().union(*(rest[i] for i in range(len(rest)) if mask >> i & 1))


def _bits(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _block_cuts(bt: _BlockTree, b: int) -> Iterator[tuple[int, int]]:
    """(node mask, terminal mask) of each mincut of block b.

    Sides are oriented away from node 0.
    """
    kind, members = bt.blocks[b]
    hs = bt.hangs(b)
    if kind == TREE:
        yield hs[1] if hs[0][0] & 1 else hs[0]
    elif kind == CYCLE:
        r = len(members)
        for i in range(r):
            acc_n = acc_t = 0
            for j in range(i + 1, r):
                acc_n |= hs[j][0]
                acc_t |= hs[j][1]
                if acc_n & 1:
                    yield bt.full ^ acc_n, bt.tfull ^ acc_t
                else:
                    yield acc_n, acc_t
    else:
        zero = next(i for i, h in enumerate(hs) if h[0] & 1)
        rest = [hs[i] for i in range(len(hs)) if i != zero]
        for mask in range(1, 1 << len(rest)):
            acc_n = acc_t = 0
            for i in range(len(rest)):
                if mask >> i & 1:
                    acc_n |= rest[i][0]
                    acc_t |= rest[i][1]
            yield acc_n, acc_t


def enumerate_mincuts(c: Cactus, expand_limit: int = 16) -> Iterator[frozenset[int] | HyperedgeCuts]:
    """Every minimum cut of the cactus exactly once, as a node set.

    The yielded side is the one not containing node 0.  Hyperedges whose rank
    exceeds ``expand_limit`` are reported as a single :class:`HyperedgeCuts`
    grouping instead of being expanded.
    """
    bt = c._tree
    for b, (kind, members) in enumerate(bt.blocks):
        if kind == HYPER and len(members) > expand_limit:
            hn = [h[0] for h in bt.hangs(b)]
            zero = next(i for i, x in enumerate(hn) if x & 1)
            comps = [hn[zero]] + [hn[i] for i in range(len(hn)) if i != zero]
            yield HyperedgeCuts(b, tuple(_bits(x) for x in comps))
            continue
        for node_mask, _ in _block_cuts(bt, b):
            yield _bits(node_mask)


def count_mincuts(c: Cactus) -> int:
    total = 0
    for kind, members in c.blocks():
        r = len(members)
        if kind == TREE:
            total += 1
        elif kind == CYCLE:
            total += r * (r - 1) // 2
        else:
            total += (1 << (r - 1)) - 1
    return total


def _represented_masks(c: Cactus) -> set[int]:
    """Terminal-index masks of represented bipartitions, minus terminal 0's side."""
    bt = c._tree
    out = set()
    for b in range(len(bt.blocks)):
        for _, tm in _block_cuts(bt, b):
            if tm & 1:
                tm = bt.tfull ^ tm
            if tm:
                out.add(tm)
    return out


def represented_bipartitions(c: Cactus) -> set[frozenset]:
    """Terminal bipartitions separated by some cactus mincut.

    Each bipartition is given by its side without the smallest terminal;
    cuts leaving one side terminal-free are skipped.
    """
    terms = c.terminals
    return {frozenset(terms[i] for i in _bits(tm)) for tm in _represented_masks(c)}


def separates(c: Cactus, A: Iterable[Hashable]) -> bool:
    """True iff some cactus mincut puts φ(A) and φ(T∖A) on opposite sides.

    Decided block by block without enumerating cuts: a tree edge works if one
    of its sides carries exactly A; a cycle works if the members whose hanging
    parts meet A form one contiguous arc and the rest meet only T∖A; a
    hyperedge works if every component is pure and both kinds occur.
    """
    A = frozenset(A)
    T = set(c.phi)
    if not A or not A < T:
        raise InvalidSubset("A must be a nonempty proper subset of the terminals")
    bt = c._tree
    a = 0
    for t in A:
        a |= 1 << bt.tindex[t]
    b = bt.tfull ^ a
    for blk, (kind, members) in enumerate(bt.blocks):
        hs = [h[1] for h in bt.hangs(blk)]
        if kind == TREE:
            if hs[0] in (a, b):
                return True
            continue
        labels = []
        pure = True
        for h in hs:
            if h == 0:
                labels.append(0)
            elif h & a == h:
                labels.append(1)
            elif h & b == h:
                labels.append(2)
            else:
                pure = False
                break
        if not pure or 1 not in labels or 2 not in labels:
            continue
        if kind == HYPER:
            return True
        seq = [x for x in labels if x]
        changes = sum(1 for i in range(len(seq)) if seq[i] != seq[i - 1])
        if changes == 2:
            return True
    return False


def alpha_beta(c: Cactus) -> tuple[int, int]:
    """(largest hyperedge rank, number of nodes lying in exactly one block).

    A node counts toward β when it touches a single block: a leaf on a tree
    edge or hyperedge, or a node whose only neighbours are its two cycle
    neighbours.  Rank-2 structures give α = 2.
    """
    alpha = max((len(h) for h in c.hyperedges), default=2)
    beta = sum(1 for i in range(c.num_nodes) if c.block_degree(i) == 1)
    return alpha, beta


def force_together(c: Cactus, S: Iterable[int]) -> Cactus:
    """Keep exactly the mincuts of ``c`` that do not separate node set S.

    The part of the incidence tree spanning S collapses into one node: tree
    edges on it are contracted, each cycle on it splits at its spanning
    members into arcs re-closed through the merged node, and each hyperedge
    on it loses its spanning members to the merged node.
    """
    S = set(S)
    for x in S:
        if not 0 <= x < c.num_nodes:
            raise UnknownNode(f"node {x} not in cactus")
    if len(S) <= 1:
        return c
    root = min(S)
    bt = _BlockTree(c, root=root)
    N = bt.N
    count = [0] * len(bt.parent)
    for x in S:
        count[x] = 1
    for x in reversed(bt.order):
        p = bt.parent[x]
        if p >= 0:
            count[p] += count[x]
    on = [k > 0 for k in count]
    merged = [i for i in range(N) if on[i]]
    M = merged[0]
    nodes: list[frozenset | None] = list(c.nodes)
    union = frozenset().union(*(c.nodes[i] for i in merged))
    for i in merged:
        nodes[i] = None
    nodes[M] = union

    def mp(x: int) -> int:
        return M if on[x] else x

    tree, rings, hypers = [], [], []
    for b, (kind, members) in enumerate(bt.blocks):
        if not on[N + b]:
            target = {TREE: tree, CYCLE: rings, HYPER: hypers}[kind]
            target.append([mp(x) for x in members])
            continue
        if kind == TREE:
            continue
        if kind == HYPER:
            hypers.append([M] + [x for x in members if not on[x]])
            continue
        r = len(members)
        pos = [j for j in range(r) if on[members[j]]]
        for i, p in enumerate(pos):
            q = pos[(i + 1) % len(pos)]
            if q <= p:
                q += r
            inner = [members[j % r] for j in range(p + 1, q)]
            rings.append([M] + inner)
    return Cactus.make(c.lam, nodes, tree, rings, hypers)


def hollow_3_stars(c: Cactus) -> list[int]:
    """Empty nodes whose only blocks are exactly three tree edges."""
    out = []
    kinds = c.blocks()
    for i, ts in enumerate(c.nodes):
        inc = c.incidence[i]
        if not ts and len(inc) == 3 and all(kinds[b][0] == TREE for b in inc):
            out.append(i)
    return out


def replace_hollow_3_stars(c: Cactus) -> Cactus:
    """Swap every hollow 3-star for a 3-cycle on its three neighbours."""
    centers = hollow_3_stars(c)
    if not centers:
        return c
    dead = set(centers)
    nodes = [None if i in dead else ts for i, ts in enumerate(c.nodes)]
    tree = [e for e in c.tree_edges if e[0] not in dead and e[1] not in dead]
    rings = list(c.cycles)
    for z in centers:
        nbrs = [u if v == z else v for u, v in c.tree_edges if z in (u, v)]
        rings.append(nbrs)
    return Cactus.make(c.lam, nodes, tree, rings, c.hyperedges)


def _contraction_groups(c: Cactus, touching_empty: bool = False) -> Iterator[tuple[int, ...]]:
    for kind, members in c.blocks():
        if kind == CYCLE:
            r = len(members)
            groups = [(members[i], members[(i + 1) % r]) for i in range(r)]
        else:
            groups = [members]
        for grp in groups:
            if not touching_empty or any(not c.nodes[x] for x in grp):
                yield tuple(grp)


def is_irredundant(c: Cactus) -> bool:
    """True iff contracting any edge or hyperedge loses a terminal bipartition."""
    base = len(_represented_masks(c))
    return all(len(_represented_masks(force_together(c, grp))) != base for grp in _contraction_groups(c))


def make_irredundant(c: Cactus) -> Cactus:
    """Contract edges and hyperedges that represent no bipartition of their own.

    Only blocks touching a terminal-free node are candidates: a cut whose
    both shores hold terminals at the block is never duplicated elsewhere.
    """
    while True:
        base = len(_represented_masks(c))
        for grp in _contraction_groups(c, touching_empty=True):
            d = force_together(c, grp)
            if len(_represented_masks(d)) == base:
                c = replace_hollow_3_stars(d)
                break
        else:
            return c


def validate(c: Cactus, terminals: Iterable[Hashable] | None = None, strict: bool = False) -> list[str]:
    """Structural violations of ``c`` (empty list when valid).

    ``strict`` additionally requires irredundancy and no hollow 3-star.
    """
    problems: list[str] = []
    N = c.num_nodes
    if not isinstance(c.lam, int) or c.lam < 0:
        problems.append("lambda must be a non-negative integer")
    if N == 0:
        return problems + ["cactus has no nodes"]
    owner: dict[Hashable, int] = {}
    for i, ts in enumerate(c.nodes):
        for t in ts:
            if t in owner:
                problems.append(f"terminal {t!r} on nodes {owner[t]} and {i}")
            owner[t] = i
    if terminals is not None:
        for t in terminals:
            if t not in owner:
                problems.append(f"terminal {t!r} unmapped")
    pairs: dict[tuple[int, int], str] = {}
    ok_ids = True
    for kind, members in c.blocks():
        if any(not 0 <= x < N for x in members):
            problems.append(f"{kind} block {members} references unknown node")
            ok_ids = False
            continue
        if len(set(members)) != len(members):
            problems.append(f"{kind} block {members} repeats a node")
        if kind == CYCLE and len(members) < 3:
            problems.append(f"cycle {members} shorter than 3")
        if kind == HYPER and len(members) < 2:
            problems.append(f"hyperedge {members} of rank < 2")
        if kind == TREE:
            edges = [tuple(sorted(members))]
        elif kind == CYCLE:
            r = len(members)
            edges = [tuple(sorted((members[i], members[(i + 1) % r]))) for i in range(r)]
        else:
            edges = []
        for e in edges:
            if e in pairs:
                problems.append(f"edge {e} lies in more than one cycle or tree edge")
            pairs[e] = kind
    if not ok_ids:
        return problems
    blocks = c.blocks()
    incidences = sum(len(m) for _, m in blocks)
    seen = {0}
    stack = [0]
    seen_blocks = set()
    while stack:
        x = stack.pop()
        for b in c.incidence[x]:
            if b not in seen_blocks:
                seen_blocks.add(b)
                for y in blocks[b][1]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
    if len(seen) != N:
        problems.append("structure is not connected")
    elif incidences != N + len(blocks) - 1:
        problems.append("node/block incidence graph has a cycle (not a cactus)")
    else:
        bt = c._tree
        for b, (kind, members) in enumerate(blocks):
            if kind == HYPER:
                comps = [h[0] for h in bt.hangs(b)]
                union = 0
                for h in comps:
                    if h & union:
                        problems.append(f"hyperedge {members} removal merges components")
                    union |= h
                if union != bt.full:
                    problems.append(f"hyperedge {members} removal misses nodes")
        if strict:
            for z in hollow_3_stars(c):
                problems.append(f"hollow 3-star at node {z}")
            if not is_irredundant(c):
                problems.append("cactus is redundant")
    return problems


def canonical(c: Cactus) -> Cactus:
    """Renumber nodes by smallest terminal; empty nodes keep their relative order last."""
    order = sorted(range(c.num_nodes), key=lambda i: (0, min(c.nodes[i])) if c.nodes[i] else (1, i))
    pos = {old: new for new, old in enumerate(order)}
    nodes = [c.nodes[i] for i in order]
    return Cactus.make(
        c.lam,
        nodes,
        [[pos[x] for x in e] for e in c.tree_edges],
        [[pos[x] for x in r] for r in c.cycles],
        [[pos[x] for x in h] for h in c.hyperedges],
    )


def to_dict(c: Cactus) -> dict:
    return {
        "lambda": c.lam,
        "nodes": [{"id": i, "terminals": sorted(ts)} for i, ts in enumerate(c.nodes)],
        "tree_edges": [list(e) for e in c.tree_edges],
        "cycles": [list(r) for r in c.cycles],
        "hyperedges": [list(h) for h in c.hyperedges],
    }


def from_dict(d: dict) -> Cactus:
    nodes: list[Iterable | None] = [None] * len(d["nodes"])
    for entry in d["nodes"]:
        nodes[entry["id"]] = entry["terminals"]
    if any(x is None for x in nodes):
        raise ValueError("node ids must be dense")
    return Cactus.make(d["lambda"], nodes, d.get("tree_edges", ()), d.get("cycles", ()), d.get("hyperedges", ()))


def to_json(c: Cactus) -> str:
    return json.dumps(to_dict(c), indent=2)


def from_json(text: str) -> Cactus:
    return from_dict(json.loads(text))


def to_dot(c: Cactus) -> str:
    """Graphviz rendering: cycles as dashed clusters, hyperedges as points."""
    lines = ["graph cactus {", f'  label="lambda = {c.lam}";', "  node [shape=circle];"]
    for i, ts in enumerate(c.nodes):
        text = ",".join(str(t) for t in sorted(ts))
        lines.append(f'  n{i} [label="{text}"];')
    for u, v in c.tree_edges:
        lines.append(f"  n{u} -- n{v};")
    for k, ring in enumerate(c.cycles):
        lines.append(f"  subgraph cluster_cycle{k} {{")
        lines.append("    style=invis;")
        lines.append("    edge [style=dashed, color=blue];")
        for i in range(len(ring)):
            lines.append(f"    n{ring[i]} -- n{ring[(i + 1) % len(ring)]};")
        lines.append("  }")
    for k, members in enumerate(c.hyperedges):
        lines.append(f"  h{k} [shape=point, width=0.15];")
        for x in members:
            lines.append(f"  h{k} -- n{x} [style=bold, color=red];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cactus_cut_weight2(c: Cactus, side: Iterable[int]) -> int:
    """Twice the cactus cut weight of a node side, in units of λ/2."""
    inside = set(side)
    total = 0
    for kind, members in c.blocks():
        if kind == TREE:
            total += 2 if (members[0] in inside) != (members[1] in inside) else 0
        elif kind == CYCLE:
            r = len(members)
            total += sum(1 for i in range(r) if (members[i] in inside) != (members[(i + 1) % r] in inside))
        else:
            flags = {x in inside for x in members}
            total += 2 if len(flags) == 2 else 0
    return total


def star(lam: int, leaves: Sequence[Iterable[Hashable]], center: Iterable[Hashable] = ()) -> Cactus:
    """Star with the given leaf payloads; hollow 3-stars come out as 3-cycles."""
    nodes = [frozenset(center)] + [frozenset(x) for x in leaves]
    return replace_hollow_3_stars(Cactus.make(lam, nodes, [(0, i) for i in range(1, len(nodes))]))


def ring(lam: int, payloads: Sequence[Iterable[Hashable]]) -> Cactus:
    return Cactus.make(lam, [frozenset(x) for x in payloads], cycles=[list(range(len(payloads)))])


def brittle(lam: int, payloads: Sequence[Iterable[Hashable]]) -> Cactus:
    return Cactus.make(lam, [frozenset(x) for x in payloads], hyperedges=[list(range(len(payloads)))])


def path(lam: int, payloads: Sequence[Iterable[Hashable]]) -> Cactus:
    return Cactus.make(lam, [frozenset(x) for x in payloads], [(i, i + 1) for i in range(len(payloads) - 1)])
