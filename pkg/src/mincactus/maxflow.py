"""Exact max-flow / min-cut with residual side extraction.

The solver is Dinic's blocking-flow algorithm on a compressed arc array.
Source and sink vertex sets are handled directly by the kernel (every source
sits at BFS level 0, any sink terminates a path), which is equivalent to
contracting them into a super-source and super-sink without rebuilding the
network for every query.

Graphs are modelled with two opposing arcs per undirected edge.  Hyperedges
of rank ≥ 3 use the bipartite gadget ``u -> e_in -> e_out -> u`` with the
weight on the middle arc and ∞ (total weight + 1) on member arcs.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import EmptySet, OverlappingTerminals, VertexOutOfRange
from .graph import Cut, Hypergraph, component_containing, is_hypergraph

try:
    from numba import njit

    def _jit(fn):
        return njit(cache=True, nogil=True)(fn)

except ImportError:  # pragma: no cover - exercised only without numba

    def _jit(fn):
        return fn


def _dinic(indptr, to, rev, cap, role):
    """Blocking-flow max-flow; mutates ``cap`` into the residual capacities.

    role[v] is 1 for sources, 2 for sinks, 0 otherwise.
    Returns (value, reach, coreach): ``reach`` marks vertices reachable from a
    source in the residual graph, ``coreach`` those that can reach a sink.
    """
    n = indptr.shape[0] - 1
    level = np.empty(n, np.int64)
    it = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    path = np.empty(n + 1, np.int64)
    total = 0
    while True:
        for v in range(n):
            level[v] = -1
        head = 0
        tail = 0
        for v in range(n):
            if role[v] == 1:
                level[v] = 0
                queue[tail] = v
                tail += 1
        found = False
        while head < tail:
            u = queue[head]
            head += 1
            if role[u] == 2:
                found = True
                continue
            for k in range(indptr[u], indptr[u + 1]):
                if cap[k] > 0:
                    v = to[k]
                    if level[v] < 0:
                        level[v] = level[u] + 1
                        queue[tail] = v
                        tail += 1
        if not found:
            break
        for v in range(n):
            it[v] = indptr[v]
        for s in range(n):
            if role[s] != 1:
                continue
            while True:
                depth = 0
                u = s
                while role[u] != 2:
                    advanced = False
                    while it[u] < indptr[u + 1]:
                        k = it[u]
                        v = to[k]
                        if cap[k] > 0 and level[v] == level[u] + 1:
                            path[depth] = k
                            depth += 1
                            u = v
                            advanced = True
                            break
                        it[u] += 1
                    if not advanced:
                        if depth == 0:
                            break
                        level[u] = -1
                        depth -= 1
                        u = to[rev[path[depth]]]
                        it[u] += 1
                if role[u] != 2:
                    break
                f = cap[path[0]]
                for j in range(1, depth):
                    if cap[path[j]] < f:
                        f = cap[path[j]]
                for j in range(depth):
                    k = path[j]
                    cap[k] -= f
                    cap[rev[k]] += f
                total += f
    reach = np.zeros(n, np.bool_)
    head = 0
    tail = 0
    for v in range(n):
        if role[v] == 1:
            reach[v] = True
            queue[tail] = v
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(indptr[u], indptr[u + 1]):
            if cap[k] > 0 and not reach[to[k]]:
                reach[to[k]] = True
                queue[tail] = to[k]
                tail += 1
    coreach = np.zeros(n, np.bool_)
    head = 0
    tail = 0
    for v in range(n):
        if role[v] == 2:
            coreach[v] = True
            queue[tail] = v
            tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(indptr[v], indptr[v + 1]):
            u = to[k]
            if not coreach[u] and cap[rev[k]] > 0:
                coreach[u] = True
                queue[tail] = u
                tail += 1
    return total, reach, coreach


_dinic_kernel = _jit(_dinic)


class _CallCounter:
    """Process-wide count of max-flow computations (for cost accounting)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._calls = 0

    def bump(self) -> None:
        with self._lock:
            self._calls += 1

    @property
    def calls(self) -> int:
        return self._calls


FLOW_CALLS = _CallCounter()


class FlowNetwork:
    """Directed capacitated network in compressed (CSR) arc form.

    Vertices ``0..n_vertices-1`` are the original vertices; any further nodes
    are hyperedge gadget nodes.
    """

    def __init__(self, num_nodes: int, n_vertices: int, arcs: list[tuple[int, int, int, int]]):
        # arcs: (u, v, cap u->v, cap v->u); each becomes an arc pair.
        self.num_nodes = num_nodes
        self.n_vertices = n_vertices
        deg = np.zeros(num_nodes + 1, np.int64)
        for u, v, _, _ in arcs:
            deg[u + 1] += 1
            deg[v + 1] += 1
        indptr = np.cumsum(deg)
        fill = indptr[:-1].copy()
        m2 = 2 * len(arcs)
        to = np.empty(m2, np.int64)
        rev = np.empty(m2, np.int64)
        cap = np.empty(m2, np.int64)
        for u, v, cuv, cvu in arcs:
            a = fill[u]
            fill[u] += 1
            b = fill[v]
            fill[v] += 1
            to[a], cap[a], rev[a] = v, cuv, b
            to[b], cap[b], rev[b] = u, cvu, a
        self.indptr = indptr
        self.to = to
        self.rev = rev
        self.capacity = cap
        self.arcs = arcs

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)


def _build_network(h: Hypergraph, gadget_all: bool) -> FlowNetwork:
    inf = h.total_weight + 1
    arcs: list[tuple[int, int, int, int]] = []
    nxt = h.n
    for members, w in h.edges:
        if len(members) == 2 and not gadget_all:
            arcs.append((members[0], members[1], w, w))
            continue
        e_in, e_out = nxt, nxt + 1
        nxt += 2
        arcs.append((e_in, e_out, w, 0))
        for u in members:
            arcs.append((u, e_in, inf, 0))
            arcs.append((e_out, u, inf, 0))
    return FlowNetwork(nxt, h.n, arcs)


def _network(h: Hypergraph) -> FlowNetwork:
    # Cached on the (immutable) graph object.
    net = h.__dict__.get("_flow_network")
    if net is None:
        net = _build_network(h, gadget_all=False)
        h.__dict__["_flow_network"] = net
    return net


def hyper_flow_network(h: Hypergraph) -> FlowNetwork:
    """The full bipartite flow network: every hyperedge gets an in/out pair."""
    return _build_network(h, gadget_all=True)


@dataclass(frozen=True)
class FlowResult:
    """A completed max-flow between vertex sets ``sources`` and ``sinks``.

    The super-source and super-sink are implicit: they stand for the
    contracted ``sources`` and ``sinks`` sets.
    """

    value: int
    network: FlowNetwork
    residual: np.ndarray
    sources: frozenset[int]
    sinks: frozenset[int]
    reach: np.ndarray
    coreach: np.ndarray

    @cached_property
    def min_side(self) -> frozenset[int]:
        n = self.network.n_vertices
        return frozenset(np.flatnonzero(self.reach[:n]).tolist())

    @cached_property
    def max_side(self) -> frozenset[int]:
        n = self.network.n_vertices
        return frozenset(np.flatnonzero(~self.coreach[:n]).tolist())


def _check_sets(n: int, S: Iterable[int], T: Iterable[int]) -> tuple[frozenset, frozenset]:
    S = frozenset(S)
    T = frozenset(T)
    if not S or not T:
        raise EmptySet("source and sink sets must be nonempty")
    if S & T:
        raise OverlappingTerminals("source and sink sets overlap")
    for v in S | T:
        if not 0 <= v < n:
            raise VertexOutOfRange(f"vertex {v} not in [0, {n})")
    return S, T


def _run(net: FlowNetwork, S: frozenset, T: frozenset) -> FlowResult:
    role = np.zeros(net.num_nodes, np.int8)
    role[list(S)] = 1
    role[list(T)] = 2
    cap = net.capacity.copy()
    value, reach, coreach = _dinic_kernel(net.indptr, net.to, net.rev, cap, role)
    FLOW_CALLS.bump()
    return FlowResult(int(value), net, cap, S, T, reach, coreach)


def max_flow(g: Hypergraph, S: Iterable[int], T: Iterable[int]) -> FlowResult:
    """Exact max-flow from vertex set S to vertex set T.

    Accepts graphs and hypergraphs; for hypergraphs the value is the relaxed
    S-vs-T mincut value.
    """
    S, T = _check_sets(g.n, S, T)
    return _run(_network(g), S, T)


def minimal_source_side(fr: FlowResult) -> Cut:
    """Inclusion-minimal min cut side: vertices reachable from the sources."""
    return Cut(fr.min_side, fr.value)


def maximal_source_side(fr: FlowResult) -> Cut:
    """Inclusion-maximal min cut side: vertices that cannot reach a sink."""
    return Cut(fr.max_side, fr.value)


def connected_side(h: Hypergraph, A: Iterable[int], X: Iterable[int]) -> frozenset[int]:
    """Component of (h/A)[X] containing A (connectivity normalization)."""
    inside = [False] * h.n
    for v in X:
        inside[v] = True
    return component_containing(h, A, inside)


def hyper_min_cut(h: Hypergraph, A: Iterable[int], B: Iterable[int], side: str = "max") -> Cut:
    """A-vs-B mincut in a hypergraph.

    ``side="min"`` returns the minimal A side.  ``side="max"`` returns the
    maximal relaxed side restricted to the component of (h/A)[X] that
    contains A, so the A side stays connected once A is contracted.
    """
    A, B = _check_sets(h.n, A, B)
    fr = _run(_network(h), A, B)
    if side == "min":
        return Cut(fr.min_side, fr.value)
    if side != "max":
        raise ValueError("side must be 'min' or 'max'")
    return Cut(connected_side(h, A, fr.max_side), fr.value)


def maximal_cut(g: Hypergraph, A: Iterable[int], B: Iterable[int]) -> Cut:
    """Maximal A-mincut, connectivity-normalized when ``g`` is a hypergraph."""
    if is_hypergraph(g):
        return hyper_min_cut(g, A, B, side="max")
    return maximal_source_side(max_flow(g, A, B))


def minimal_cut(g: Hypergraph, A: Iterable[int], B: Iterable[int]) -> Cut:
    return minimal_source_side(max_flow(g, A, B))


def min_cut_value(g: Hypergraph, A: Iterable[int], B: Iterable[int]) -> int:
    return max_flow(g, A, B).value
