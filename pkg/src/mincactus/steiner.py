"""Steiner cactus construction by divide and conquer.

Pipeline:

1. λ and a terminal partition (terminals with λ(u, v) > λ share a class) are
   computed; each class is contracted onto its smallest terminal so every two
   remaining terminals are separated by some Steiner mincut.
2. :func:`good_split_collection` samples terminals at rates 2^-i and keeps the
   λ-valued maximal isolating mincuts that are splits (≥ 2 terminals per
   side).  It returns either one balanced split or a disjoint family of small
   ones.
3. :func:`induced_decomposition` cuts the graph along those splits.  Each
   split side keeps its vertices and gains an anchor vertex for the outside;
   a remainder copy has every split side contracted to its anchor.
4. Parts are solved recursively; at most three terminals are solved by
   trying every bipartition, and a part with no split is a star (or, for
   hypergraphs, a star or a single hyperedge).
5. :func:`merge_cactus` glues sub-cacti back together at the anchors.

The same engine serves graphs and hypergraphs; only the maximal cut
extraction (connected sides) and the no-split base case differ.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .cactus import (
    CYCLE,
    HYPER,
    TREE,
    Cactus,
    brittle,
    canonical,
    make_irredundant,
    path,
    replace_hollow_3_stars,
    ring,
    star,
    validate,
)
from .errors import (
    AnchorNotLeaflike,
    InternalError,
    OverlappingSplits,
    SplitExists,
    SplitVerificationError,
    VertexOutOfRange,
    WrongSize,
)
from .graph import Hypergraph, cut_value, is_hypergraph, quotient
from .isolating import (
    Subproblem,
    _samples,
    _terminals,
    connectivity_partition,
    maximal_isolating_mincuts,
    minimal_isolating_mincuts,
    steiner_mincut_value,
)
from .maxflow import FLOW_CALLS, max_flow


@dataclass(frozen=True)
class CactusConfig:
    """Knobs of the randomized construction.

    ``reps`` is the constant c in R = ⌈c · ln n⌉ sampling rounds.
    ``verify_splits`` re-checks every chosen split and the final structure and
    raises instead of silently continuing.  ``lambda_mode`` picks how λ is
    computed.  ``threads`` > 1 solves top-level subproblems concurrently.
    """

    seed: int = 0
    reps: float = 48.0
    verify_splits: bool = False
    lambda_mode: str = "exact"
    threads: int = 1


@dataclass(frozen=True)
class SplitCollection:
    splits: tuple[frozenset[int], ...] = ()
    balanced: bool = False

    def __len__(self) -> int:
        return len(self.splits)

    def __iter__(self):
        return iter(self.splits)

    def __bool__(self) -> bool:
        return bool(self.splits)


@dataclass(frozen=True)
class Decomposition:
    """Subproblems induced by a split collection.

    ``subproblems[i]`` for i < k holds split i with its anchor as pivot;
    ``subproblems[k]`` is the remainder.  ``anchors`` maps each anchor label
    to the two subproblem indices sharing it and ``anchor_sides`` to the split
    side (vertex ids of the parent graph) it stands for.
    """

    subproblems: tuple[Subproblem, ...]
    anchors: Mapping[Hashable, tuple[int, int]]
    anchor_sides: Mapping[Hashable, frozenset[int]]

    @property
    def anchor_labels(self) -> list[Hashable]:
        return list(self.anchors)


@dataclass
class BuildTrace:
    """Cost and structure record of one construction."""

    lam: int = 0
    max_depth: int = 0
    subproblems: int = 0
    flow_calls: int = 0
    level_flows: dict[int, int] = field(default_factory=dict)
    splits: list[frozenset] = field(default_factory=list)
    fallbacks: int = 0
    terminals: int = 0
    vertices: int = 0


def _split_side_ok(g: Hypergraph, X: frozenset[int], tset: set[int], lam: int) -> bool:
    k = sum(1 for v in X if v in tset)
    return 2 <= k <= len(tset) - 2 and cut_value(g, X) == lam


def _select_splits(
    g: Hypergraph,
    T: Sequence[int],
    lam: int,
    found: Iterable[frozenset[int]],
    verify: bool,
) -> SplitCollection:
    tset = set(T)
    n_t = len(T)
    quarter = n_t / 4
    need = max(2.0, quarter)
    cands = sorted(set(found), key=lambda X: (len(X), sorted(X)))
    count = {X: sum(1 for v in X if v in tset) for X in cands}
    for X in cands:
        if count[X] >= need and n_t - count[X] >= need:
            return SplitCollection((X,), balanced=True)
    small = [X for X in cands if 2 <= count[X] <= quarter]
    chosen = set()
    for t in T:
        best = None
        for i, X in enumerate(small):
            if t in X and (best is None or len(X) > len(small[best])):
                best = i
        if best is not None:
            chosen.add(best)
    out = []
    used: set[int] = set()
    for i in sorted(chosen):
        Y = frozenset(small[i] - used)
        used |= small[i]
        if _split_side_ok(g, Y, tset, lam):
            out.append(Y)
        elif verify:
            raise SplitVerificationError(f"pruned split {sorted(Y)} is not a λ-split")
    return SplitCollection(tuple(out), balanced=False)


def good_split_collection(
    g: Hypergraph,
    T: Iterable[int],
    lam: int,
    config: CactusConfig = CactusConfig(),
    path: tuple[int, ...] = (),
) -> SplitCollection:
    """Sample terminals at rates 2^-i, keep λ-valued maximal isolating splits.

    Returns one balanced split (≥ max(2, |T|/4) terminals on each side) when
    one is found, else the per-terminal largest small splits made disjoint.
    ``path`` keys the random streams of this subproblem.
    """
    T = tuple(sorted(T))
    if len(T) < 4:
        return SplitCollection()
    found: dict[frozenset[int], None] = {}
    seen: set[tuple[int, ...]] = set()
    rates = range(1, math.ceil(math.log2(len(T))) + 1)
    for sample in _samples(T, config.seed, config.reps, g.n, rates, (2, *path)):
        if sample in seen:
            continue
        seen.add(sample)
        for cut in maximal_isolating_mincuts(g, sample).cuts.values():
            if cut.value == lam:
                found.setdefault(cut.side)
    return _select_splits(g, T, lam, found, config.verify_splits)


def exhaustive_split_collection(g: Hypergraph, T: Iterable[int], lam: int, verify: bool = False) -> SplitCollection:
    """Deterministic fallback: maximal isolating mincuts of all 2- and 3-subsets."""
    T = tuple(sorted(T))
    found: dict[frozenset[int], None] = {}
    for r in (2, 3):
        for sample in combinations(T, r):
            for cut in maximal_isolating_mincuts(g, sample).cuts.values():
                if cut.value == lam:
                    found.setdefault(cut.side)
    return _select_splits(g, T, lam, found, verify)


def _fresh_label(g: Hypergraph) -> int:
    return max((x for x in g.labels if isinstance(x, int)), default=-1) + 1


def induced_decomposition(g: Hypergraph, T: Iterable[int], S: SplitCollection | Sequence[Iterable[int]]) -> Decomposition:
    """Split ``g`` along disjoint split sides, one anchor per side.

    Anchor labels are fresh integers above every label of ``g``.
    """
    T = tuple(sorted(T))
    splits = [frozenset(X) for X in S]
    if not splits:
        return Decomposition((Subproblem(g, T),), {}, {})
    owner: dict[int, int] = {}
    for i, X in enumerate(splits):
        for v in X:
            if not 0 <= v < g.n:
                raise VertexOutOfRange(f"vertex {v} not in [0, {g.n})")
            if v in owner:
                raise OverlappingSplits(f"vertex {v} in splits {owner[v]} and {i}")
            owner[v] = i
    base = _fresh_label(g)
    k = len(splits)
    subs = []
    for i, X in enumerate(splits):
        keep = sorted(X)
        part_of = [len(keep)] * g.n
        for j, v in enumerate(keep):
            part_of[v] = j
        labels = [g.labels[v] for v in keep] + [base + i]
        sub = quotient(g, part_of, len(keep) + 1, labels)
        sub_T = tuple([part_of[t] for t in T if owner.get(t) == i] + [len(keep)])
        subs.append(Subproblem(sub, sub_T, pivot=len(keep), origin=tuple(keep) + (-1,)))
    rest = [v for v in range(g.n) if v not in owner]
    part_of = [0] * g.n
    for j, v in enumerate(rest):
        part_of[v] = j
    for v, i in owner.items():
        part_of[v] = len(rest) + i
    labels = [g.labels[v] for v in rest] + [base + i for i in range(k)]
    sub = quotient(g, part_of, len(rest) + k, labels)
    sub_T = tuple([part_of[t] for t in T if t not in owner] + [len(rest) + i for i in range(k)])
    subs.append(Subproblem(sub, sub_T, origin=tuple(rest) + (-1,) * k))
    anchors = {base + i: (i, k) for i in range(k)}
    sides = {base + i: splits[i] for i in range(k)}
    return Decomposition(tuple(subs), anchors, sides)


def trivial_cactus(g: Hypergraph, T: Iterable[int], lam: int | None = None) -> Cactus:
    """Cactus for two or three terminals from their bipartition values."""
    T = tuple(sorted(T))
    if not 2 <= len(T) <= 3:
        raise WrongSize("trivial cactus needs 2 or 3 terminals")
    lab = [g.labels[t] for t in T]
    if len(T) == 2:
        value = max_flow(g, [T[0]], [T[1]]).value
        return path(value if lam is None else lam, [[lab[0]], [lab[1]]])
    vals = [max_flow(g, [t], [u for u in T if u != t]).value for t in T]
    if lam is None:
        lam = min(vals)
    tight = [i for i in range(3) if vals[i] == lam]
    if len(tight) == 3:
        return ring(lam, [[x] for x in lab])
    if len(tight) == 2:
        mid = next(i for i in range(3) if i not in tight)
        return path(lam, [[lab[tight[0]]], [lab[mid]], [lab[tight[1]]]])
    if len(tight) == 1:
        i = tight[0]
        return path(lam, [[lab[i]], [lab[j] for j in range(3) if j != i]])
    raise InternalError("no terminal bipartition attains λ")


def star_cactus(g: Hypergraph, T: Iterable[int], lam: int | None = None) -> Cactus:
    """Star whose leaves are the terminals with λ-valued isolating mincuts."""
    T = tuple(sorted(T))
    iso = minimal_isolating_mincuts(g, T)
    if lam is None:
        lam = min(iso.values.values())
    leaves = [t for t in T if iso[t].value == lam]
    center = [t for t in T if iso[t].value != lam]
    if len(center) > 1:
        raise SplitExists(f"{len(center)} terminals have isolating value above λ")
    return star(lam, [[g.labels[t]] for t in leaves], [g.labels[t] for t in center])


def star_or_brittle_cactus(h: Hypergraph, T: Iterable[int], lam: int | None = None) -> Cactus:
    """One flow on the two lowest terminals decides between brittle and star."""
    T = tuple(sorted(T, key=lambda v: h.labels[v]))
    if lam is None:
        lam = steiner_mincut_value(h, T)
    if len(T) >= 4 and max_flow(h, T[:2], T[2:]).value == lam:
        return brittle(lam, [[h.labels[t]] for t in T])
    return star_cactus(h, T, lam)


# --- merging -------------------------------------------------------------


class _Draft:
    """Mutable union of two cacti used while gluing at an anchor."""

    def __init__(self, lam: int, first: Cactus, second: Cactus):
        self.lam = lam
        off = first.num_nodes
        self.offset = off
        self.nodes: list[frozenset | None] = list(first.nodes) + list(second.nodes)
        self.tree = [list(e) for e in first.tree_edges] + [[u + off, v + off] for u, v in second.tree_edges]
        self.rings = [list(r) for r in first.cycles] + [[x + off for x in r] for r in second.cycles]
        self.hypers = [list(h) for h in first.hyperedges] + [[x + off for x in h] for h in second.hyperedges]

    def block_of(self, node: int) -> tuple[str, int]:
        for i, e in enumerate(self.tree):
            if node in e:
                return TREE, i
        for i, r in enumerate(self.rings):
            if node in r:
                return CYCLE, i
        for i, h in enumerate(self.hypers):
            if node in h:
                return HYPER, i
        raise AnchorNotLeaflike(f"node {node} has no block")

    def rotated_ring(self, i: int, node: int) -> list[int]:
        r = self.rings[i]
        j = r.index(node)
        return r[j:] + r[:j]

    def finish(self) -> Cactus:
        return replace_hollow_3_stars(Cactus.make(self.lam, self.nodes, self.tree, self.rings, self.hypers))


def _anchor_info(c: Cactus, a: Hashable) -> tuple[int, str]:
    if a not in c.phi:
        raise AnchorNotLeaflike(f"anchor {a!r} missing from sub-cactus")
    node = c.phi[a]
    if c.nodes[node] != frozenset([a]):
        raise AnchorNotLeaflike(f"anchor {a!r} shares its node with other terminals")
    inc = c.incidence[node]
    if len(inc) != 1:
        raise AnchorNotLeaflike(f"anchor {a!r} lies in {len(inc)} blocks")
    return node, c.blocks()[inc[0]][0]


def _hang_terminals(c: Cactus, member: int, block_kind: str, node_of_anchor: int) -> list[Hashable]:
    b = c.incidence[node_of_anchor][0]
    _, tm = c._tree.hang(member, b)
    terms = c.terminals
    return [terms[i] for i in range(len(terms)) if tm >> i & 1]


def merge_at_anchor(
    g: Hypergraph,
    lam: int,
    first: Cactus,
    second: Cactus,
    anchor: Hashable,
    expand,
) -> Cactus:
    """Glue two cacti that share the anchor terminal.

    ``expand(label)`` returns the vertices of ``g`` standing for a terminal
    label; it is used by the two flow tests that resolve the cycle/cycle case.
    """
    n1, k1 = _anchor_info(first, anchor)
    n2, k2 = _anchor_info(second, anchor)
    order = {TREE: 0, CYCLE: 1, HYPER: 2}
    if order[k1] > order[k2]:
        first, second, n1, n2, k1, k2 = second, first, n2, n1, k2, k1
    d = _Draft(lam, first, second)
    a1, a2 = n1, n2 + d.offset
    _, b1 = d.block_of(a1)
    _, b2 = d.block_of(a2)
    if k1 == TREE:
        e = d.tree[b1]
        x = e[0] if e[1] == a1 else e[1]
        if k2 == TREE:
            f = d.tree[b2]
            y = f[0] if f[1] == a2 else f[1]
            d.tree = [t for i, t in enumerate(d.tree) if i not in (b1, b2)]
            d.tree.append([x, y])
        else:
            target = d.rings[b2] if k2 == CYCLE else d.hypers[b2]
            target[target.index(a2)] = x
            del d.tree[b1]
        d.nodes[a1] = None
        d.nodes[a2] = None
        return d.finish()
    if k1 == CYCLE and k2 == CYCLE:
        r1 = d.rotated_ring(b1, a1)
        r2 = d.rotated_ring(b2, a2)
        x1, y1 = r1[1], r1[-1]
        x2, y2 = r2[1], r2[-1]

        def side(nodes_: list[tuple[Cactus, int, int]]) -> set[int]:
            out: set[int] = set()
            for c, member, anchor_node in nodes_:
                for t in _hang_terminals(c, member, CYCLE, anchor_node):
                    out |= expand(t)
            return out

        off = d.offset
        hx1 = side([(first, x1, n1)])
        hy1 = side([(first, y1, n1)])
        hx2 = side([(second, x2 - off, n2)])
        hy2 = side([(second, y2 - off, n2)])

        def tight(S: set[int], T_: set[int]) -> bool:
            return bool(S) and bool(T_) and not (S & T_) and max_flow(g, S, T_).value == lam

        lo, hi = (b1, b2) if b1 < b2 else (b2, b1)
        if tight(hx1 | hx2, hy1 | hy2):
            new_ring = r1[1:] + r2[1:][::-1]
        elif tight(hx1 | hy2, hx2 | hy1):
            new_ring = r1[1:] + r2[1:]
        else:
            d.rings[b2][d.rings[b2].index(a2)] = a1
            d.nodes[a1] = frozenset()
            d.nodes[a2] = None
            return d.finish()
        del d.rings[hi]
        del d.rings[lo]
        d.rings.append(new_ring)
        d.nodes[a1] = None
        d.nodes[a2] = None
        return d.finish()
    # cycle/hyperedge and hyperedge/hyperedge: the anchor becomes a shared empty node
    target = d.rings[b2] if k2 == CYCLE else d.hypers[b2]
    target[target.index(a2)] = a1
    d.nodes[a1] = frozenset()
    d.nodes[a2] = None
    return d.finish()


def merge_cactus(
    g: Hypergraph,
    T: Iterable[int],
    decomposition: Decomposition,
    subs: Sequence[Cactus],
    lam: int | None = None,
) -> Cactus:
    """Glue the remainder's cactus with each split's cactus at its anchor."""
    if lam is None:
        lam = subs[-1].lam
    sides = decomposition.anchor_sides
    index = g.label_index

    def expand(label: Hashable) -> set[int]:
        if label in sides:
            return set(sides[label])
        return {index[label]}

    merged = subs[-1]
    for label, (i, _) in decomposition.anchors.items():
        merged = merge_at_anchor(g, lam, merged, subs[i], label, expand)
    return merged


# --- driver --------------------------------------------------------------


class _Builder:
    def __init__(self, lam: int, config: CactusConfig, hyper: bool, trace: BuildTrace, everything: frozenset):
        self.lam = lam
        self.config = config
        self.hyper = hyper
        self.trace = trace
        self.everything = everything
        self.pool = ThreadPoolExecutor(config.threads) if config.threads > 1 else None

    def _account(self, depth: int, before: int) -> None:
        used = FLOW_CALLS.calls - before
        self.trace.level_flows[depth] = self.trace.level_flows.get(depth, 0) + used

    def _base(self, g: Hypergraph, T: tuple[int, ...]) -> Cactus:
        if self.hyper:
            return star_or_brittle_cactus(g, T, self.lam)
        return star_cactus(g, T, self.lam)

    def solve(self, g: Hypergraph, T: tuple[int, ...], depth: int, key: tuple[int, ...], expansion: dict) -> Cactus:
        trace = self.trace
        trace.subproblems += 1
        trace.max_depth = max(trace.max_depth, depth)
        before = FLOW_CALLS.calls
        if len(T) <= 3:
            c = trivial_cactus(g, T, self.lam)
            self._account(depth, before)
            return c
        S = good_split_collection(g, T, self.lam, self.config, path=key)
        if not S:
            try:
                c = self._base(g, T)
                self._account(depth, before)
                return c
            except SplitExists:
                trace.fallbacks += 1
                S = exhaustive_split_collection(g, T, self.lam, self.config.verify_splits)
                if not S:
                    raise
        dec = induced_decomposition(g, T, S)
        child_expansions = self._expansions(g, T, dec, expansion)
        for label in dec.anchors:
            i = dec.anchors[label][0]
            trace.splits.append(child_expansions[-1][label])
        self._account(depth, before)
        jobs = [
            (sp.graph, tuple(sorted(sp.terminals)), depth + 1, key + (i,), child_expansions[i])
            for i, sp in enumerate(dec.subproblems)
        ]
        if self.pool is not None and depth == 0:
            subs = list(self.pool.map(lambda j: self.solve(*j), jobs))
        else:
            subs = [self.solve(*j) for j in jobs]
        before = FLOW_CALLS.calls
        merged = merge_cactus(g, T, dec, subs, self.lam)
        self._account(depth, before)
        return merged

    def _expansions(self, g: Hypergraph, T, dec: Decomposition, expansion: dict) -> list[dict]:
        """Per subproblem: terminal label -> top-level terminals it stands for."""
        labels = g.labels
        out = []
        inside_sets = {}
        for label, X in dec.anchor_sides.items():
            inside = frozenset().union(*(expansion[labels[t]] for t in T if t in X))
            inside_sets[label] = inside
        for i, sp in enumerate(dec.subproblems[:-1]):
            e = {}
            for t in sp.terminals:
                lab = sp.graph.labels[t]
                e[lab] = expansion[lab] if lab in expansion else None
            anchor = sp.graph.labels[sp.pivot]
            e[anchor] = self.everything - inside_sets[anchor]
            out.append(e)
        rem = dec.subproblems[-1]
        e = {}
        for t in rem.terminals:
            lab = rem.graph.labels[t]
            e[lab] = inside_sets[lab] if lab in inside_sets else expansion[lab]
        out.append(e)
        return out


def build_cactus(g: Hypergraph, T: Iterable[int] | None = None, config: CactusConfig = CactusConfig()) -> tuple[Cactus, BuildTrace]:
    """Full construction with its trace.  See :func:`compute_steiner_cactus`."""
    g.require_connected()
    T = _terminals(g, T)
    hyper = is_hypergraph(g)
    start = FLOW_CALLS.calls
    lam = steiner_mincut_value(g, T, mode=config.lambda_mode, seed=config.seed, reps=config.reps)
    parts = connectivity_partition(g, T, lam, seed=config.seed, reps=config.reps)
    rep_of = {}
    for p in parts:
        for t in p:
            rep_of[t] = p[0]
    new_id: dict[int, int] = {}
    part_of = [0] * g.n
    labels = []
    for v in range(g.n):
        r = rep_of.get(v, v)
        if r not in new_id:
            new_id[r] = len(labels)
            labels.append(g.labels[r])
        part_of[v] = new_id[r]
    g2 = quotient(g, part_of, len(labels), labels)
    T2 = tuple(sorted(new_id[p[0]] for p in parts))
    trace = BuildTrace(lam=lam, terminals=len(T), vertices=g.n)
    everything = frozenset(g2.labels[t] for t in T2)
    builder = _Builder(lam, config, hyper, trace, everything)
    try:
        core = builder.solve(g2, T2, 0, (), {lab: frozenset([lab]) for lab in everything})
    finally:
        if builder.pool is not None:
            builder.pool.shutdown()
    core = make_irredundant(core)
    members = {g.labels[p[0]]: [g.labels[t] for t in p] for p in parts}
    nodes = [frozenset(x for t in ts for x in members.get(t, [t])) for ts in core.nodes]
    result = canonical(Cactus(lam, tuple(nodes), core.tree_edges, core.cycles, core.hyperedges))
    trace.flow_calls = FLOW_CALLS.calls - start
    if config.verify_splits:
        problems = validate(result, [g.labels[t] for t in T])
        if problems:
            raise SplitVerificationError("; ".join(problems))
    return result, trace


def compute_steiner_cactus(g: Hypergraph, T: Iterable[int] | None = None, config: CactusConfig = CactusConfig()) -> Cactus:
    """T-Steiner cactus of a connected graph (T defaults to all vertices).

    Every bipartition of T whose separating mincut has value λ is separated
    by a mincut of the returned cactus and vice versa; terminals are node
    payloads, labelled with the graph's vertex labels.
    """
    return build_cactus(g, T, config)[0]
