"""Immutable weighted graphs and hypergraphs.

Both containers store hyperedges as ``(members, weight)`` pairs where
``members`` is a sorted tuple of distinct vertex ids.  A :class:`WeightedGraph`
is simply a hypergraph whose edges all have rank two; most algorithms accept
either and dispatch on :func:`is_hypergraph` where the semantics differ.

Every vertex also carries a label.  Contractions keep labels of untouched
vertices, which lets a chain of contracted copies be traced back to the
vertices of the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .errors import (
    DisconnectedGraph,
    EmptyOrFullSide,
    EmptySet,
    NegativeWeight,
    NotAGraph,
    VertexOutOfRange,
    WeightOverflow,
)

WEIGHT_CAP = 1 << 62

Edge = tuple[tuple[int, ...], int]


def _normalize(n: int, raw: Iterable[tuple[Iterable[int], int]]) -> tuple[Edge, ...]:
    merged: dict[tuple[int, ...], int] = {}
    total = 0
    for members, w in raw:
        if w < 0:
            raise NegativeWeight(f"negative weight {w}")
        key = tuple(sorted(set(members)))
        for v in key:
            if not 0 <= v < n:
                raise VertexOutOfRange(f"vertex {v} not in [0, {n})")
        if len(key) < 2 or w == 0:
            continue
        merged[key] = merged.get(key, 0) + int(w)
        total += int(w)
        if total >= WEIGHT_CAP:
            raise WeightOverflow("total weight reaches the 2^62 cap")
    return tuple(merged.items())


class Hypergraph:
    """Common base: ``n`` vertices, normalized hyperedges, vertex labels."""

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[Iterable[int], int]],
        labels: Sequence[Hashable] | None = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.edges: tuple[Edge, ...] = _normalize(n, edges)
        if labels is None:
            self.labels: tuple[Hashable, ...] = tuple(range(n))
        else:
            self.labels = tuple(labels)
            if len(self.labels) != n:
                raise ValueError("one label per vertex required")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def total_weight(self) -> int:
        return sum(w for _, w in self.edges)

    @cached_property
    def size(self) -> int:
        """Total size p = sum of hyperedge ranks."""
        return sum(len(e) for e, _ in self.edges)

    @cached_property
    def max_rank(self) -> int:
        return max((len(e) for e, _ in self.edges), default=0)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (members, _) in enumerate(self.edges):
            for v in members:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def label_index(self) -> dict[Hashable, int]:
        index = {lab: v for v, lab in enumerate(self.labels)}
        if len(index) != self.n:
            raise ValueError("vertex labels are not unique")
        return index

    def vertex_of(self, label: Hashable) -> int:
        return self.label_index[label]

    @cached_property
    def is_connected(self) -> bool:
        return self.n <= 1 or len(connected_components(self)) == 1

    def require_connected(self) -> None:
        if not self.is_connected:
            raise DisconnectedGraph("graph is not connected")

    def __eq__(self, other: object) -> bool:
        return (
            type(self) is type(other)
            and self.n == other.n
            and self.labels == other.labels
            and sorted(self.edges) == sorted(other.edges)
        )

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.n, tuple(sorted(self.edges))))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, m={self.m})"


class WeightedGraph(Hypergraph):
    """Undirected weighted graph: a hypergraph of rank exactly two."""

    def __init__(self, n, edges, labels=None):
        super().__init__(n, edges, labels)
        for members, _ in self.edges:
            if len(members) != 2:
                raise NotAGraph("graph edges must have exactly two endpoints")

    def edge_list(self) -> list[tuple[int, int, int]]:
        return [(e[0], e[1], w) for e, w in self.edges]


class WeightedHypergraph(Hypergraph):
    """Weighted hypergraph; hyperedges of any rank ≥ 2."""


def is_hypergraph(g: Hypergraph) -> bool:
    return isinstance(g, WeightedHypergraph)


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int, int]],
    labels: Sequence[Hashable] | None = None,
    require_connected: bool = False,
) -> WeightedGraph:
    """Build a normalized graph from ``(u, v, w)`` triples.

    Parallel edges are merged, zero-weight edges and self-loops dropped.
    """
    g = WeightedGraph(n, (((u, v), w) for u, v, w in edges), labels)
    if require_connected:
        g.require_connected()
    return g


def build_hypergraph(
    n: int,
    hyperedges: Iterable[tuple[Iterable[int], int]],
    labels: Sequence[Hashable] | None = None,
    require_connected: bool = False,
) -> WeightedHypergraph:
    """Build a normalized hypergraph from ``(members, w)`` pairs."""
    h = WeightedHypergraph(n, hyperedges, labels)
    if require_connected:
        h.require_connected()
    return h


def as_hypergraph(g: Hypergraph) -> WeightedHypergraph:
    if isinstance(g, WeightedHypergraph):
        return g
    return WeightedHypergraph(g.n, g.edges, g.labels)


def as_graph(h: Hypergraph) -> WeightedGraph:
    """Reinterpret a rank-2 hypergraph as a graph (NotAGraph otherwise)."""
    if isinstance(h, WeightedGraph):
        return h
    return WeightedGraph(h.n, h.edges, h.labels)


@dataclass(frozen=True)
class Cut:
    """A vertex side X with its boundary value C(X)."""

    side: frozenset[int]
    value: int

    def boundary(self, g: Hypergraph) -> tuple[int, ...]:
        return boundary_edges(g, self.side)


def _mask(g: Hypergraph, X: Iterable[int]) -> list[bool]:
    inside = [False] * g.n
    for v in X:
        if not 0 <= v < g.n:
            raise VertexOutOfRange(f"vertex {v} not in [0, {g.n})")
        inside[v] = True
    return inside


def _crossing(members: tuple[int, ...], inside: list[bool]) -> bool:
    first = inside[members[0]]
    for v in members:
        if inside[v] != first:
            return True
    return False


def boundary_edges(g: Hypergraph, X: Iterable[int]) -> tuple[int, ...]:
    inside = _mask(g, X)
    return tuple(i for i, (e, _) in enumerate(g.edges) if _crossing(e, inside))


def cut_value(g: Hypergraph, X: Iterable[int]) -> int:
    """C(X): total weight of (hyper)edges with members on both sides."""
    inside = _mask(g, X)
    k = sum(inside)
    if k == 0 or k == g.n:
        raise EmptyOrFullSide("cut side must be a nonempty proper subset")
    return sum(w for e, w in g.edges if _crossing(e, inside))


def make_cut(g: Hypergraph, X: Iterable[int]) -> Cut:
    side = frozenset(X)
    return Cut(side, cut_value(g, side))


def quotient(
    g: Hypergraph,
    part_of: Sequence[int],
    k: int,
    labels: Sequence[Hashable],
) -> Hypergraph:
    """Map vertex v to class ``part_of[v]`` in ``0..k-1`` and merge.

    Edges collapse to their image; rank-1 images vanish and duplicate images
    merge with summed weight.  The result has the same type as ``g``.
    """
    cls = type(g)
    out = cls.__new__(cls)
    out.n = k
    out.labels = tuple(labels)
    merged: dict[tuple[int, ...], int] = {}
    for members, w in g.edges:
        img = tuple(sorted({part_of[v] for v in members}))
        if len(img) >= 2:
            merged[img] = merged.get(img, 0) + w
    out.edges = tuple(merged.items())
    return out


def contract(
    g: Hypergraph, X: Iterable[int], label: Hashable | None = None
) -> tuple[Hypergraph, int]:
    """Contract X into one vertex, placed last; returns (graph, its id).

    Remaining vertices keep their relative order and labels.  The new vertex
    takes ``label`` (default: the smallest label in X).
    """
    inside = _mask(g, X)
    members = [v for v in range(g.n) if inside[v]]
    if not members:
        raise EmptySet("cannot contract an empty set")
    rest = [v for v in range(g.n) if not inside[v]]
    k = len(rest) + 1
    part_of = [0] * g.n
    for i, v in enumerate(rest):
        part_of[v] = i
    for v in members:
        part_of[v] = k - 1
    if label is None:
        label = min(g.labels[v] for v in members)
    labels = [g.labels[v] for v in rest] + [label]
    return quotient(g, part_of, k, labels), k - 1


def induced_subhypergraph(h: Hypergraph, X: Iterable[int]) -> Hypergraph:
    """Keep exactly the hyperedges inside X, on vertex set X (renumbered).

    Vertices of X are renumbered in increasing order and keep their labels.
    """
    inside = _mask(h, X)
    keep = [v for v in range(h.n) if inside[v]]
    new_id = {v: i for i, v in enumerate(keep)}
    cls = type(h)
    out = cls.__new__(cls)
    out.n = len(keep)
    out.labels = tuple(h.labels[v] for v in keep)
    out.edges = tuple(
        (tuple(new_id[v] for v in e), w)
        for e, w in h.edges
        if all(inside[v] for v in e)
    )
    return out


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def connected_components(g: Hypergraph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by smallest member."""
    dsu = _DSU(g.n)
    for members, _ in g.edges:
        for v in members[1:]:
            dsu.union(members[0], v)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(dsu.find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def component_containing(
    g: Hypergraph, seeds: Iterable[int], inside: Sequence[bool]
) -> frozenset[int]:
    """Component of (g/seeds)[X] containing the seeds, X given as a mask.

    Only hyperedges lying entirely inside X are traversed; all seeds start in
    the same component, which models contracting them into one vertex.
    """
    inc = g.incidence
    edges = g.edges
    usable: dict[int, bool] = {}
    seen = set()
    stack = []
    for s in seeds:
        if s not in seen:
            seen.add(s)
            stack.append(s)
    while stack:
        v = stack.pop()
        for e in inc[v]:
            ok = usable.get(e)
            if ok is None:
                ok = all(inside[u] for u in edges[e][0])
                usable[e] = ok
            if ok:
                for u in edges[e][0]:
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
    return frozenset(seen)
