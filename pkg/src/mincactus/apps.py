"""Applications: +1 augmentation value and incremental hypergraph mincut."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .cactus import Cactus, alpha_beta, force_together
from .errors import UnknownVertex, WeightedInsertion
from .graph import Hypergraph, as_hypergraph, build_hypergraph, connected_components
from .hypercactus import compute_steiner_hypercactus
from .isolating import _terminals
from .maxflow import FLOW_CALLS
from .oracle import brute_bipartition_table
from .steiner import CactusConfig


def plus_one_augmentation_value(h: Hypergraph, T: Iterable[int] | None = None, config: CactusConfig = CactusConfig()) -> int:
    """Fewest unit graph edges whose addition raises λ(T) by one.

    Read off the irredundant hypercactus as max(α − 1, ⌈β / 2⌉), where α is
    the largest hyperedge rank (2 without hyperedges) and β counts nodes
    lying in a single block.
    """
    c = compute_steiner_hypercactus(h, T, config)
    alpha, beta = alpha_beta(c)
    return max(alpha - 1, math.ceil(beta / 2))


def brute_augmentation_value(h: Hypergraph, T: Iterable[int] | None = None) -> int:
    """Smallest set of terminal pairs crossing every λ-valued bipartition."""
    T = _terminals(h, T)
    table = brute_bipartition_table(h, T)
    index = {h.labels[t]: i for i, t in enumerate(T)}
    tight = [sum(1 << index[x] for x in A) for A in table.tight()]
    full = (1 << len(tight)) - 1
    cover = []
    for i, j in combinations(range(len(T)), 2):
        m = 0
        for k, a in enumerate(tight):
            if (a >> i & 1) != (a >> j & 1):
                m |= 1 << k
        cover.append(m)
    reachable = {0}
    for size in range(1, len(tight) + 1):
        reachable = {r | m for r in reachable for m in cover}
        if full in reachable:
            return size
    return 0


def _component_cactus(h: Hypergraph, comps: Sequence[Sequence[int]]) -> Cactus:
    """Cactus of the λ = 0 state: one node per component."""
    nodes = [frozenset(h.labels[v] for v in comp) for comp in comps]
    if len(comps) == 2:
        return Cactus.make(0, nodes, [(0, 1)])
    return Cactus.make(0, nodes, hyperedges=[list(range(len(comps)))])


def scratch_cactus(h: Hypergraph, config: CactusConfig = CactusConfig()) -> Cactus:
    """Global (T = V) hypercactus; disconnected inputs get the component cactus."""
    comps = connected_components(h)
    if len(comps) > 1:
        return _component_cactus(h, comps)
    return compute_steiner_hypercactus(h, None, config)


@dataclass
class IncrementalState:
    """Hypergraph under unit hyperedge insertions with its mincut cactus.

    ``cactus`` represents exactly the global mincuts of ``graph`` (value
    ``lam``).  A phase ends when an insertion destroys every mincut.
    """

    graph: Hypergraph
    lam: int
    cactus: Cactus
    phase: int = 1
    stale: bool = False
    config: CactusConfig = CactusConfig()
    insertions: int = 0
    rebuild_flows: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.graph.n


def _rebuild(state: IncrementalState) -> None:
    before = FLOW_CALLS.calls
    state.cactus = scratch_cactus(state.graph, state.config)
    state.lam = state.cactus.lam
    state.stale = False
    state.rebuild_flows.append(FLOW_CALLS.calls - before)


def incremental_new(n: int, initial: Hypergraph | Iterable[tuple[Iterable[int], int]] = (), config: CactusConfig = CactusConfig()) -> IncrementalState:
    """Start phase 1 from ``initial`` (a hypergraph or hyperedge list)."""
    if isinstance(initial, Hypergraph):
        if initial.n != n:
            raise UnknownVertex(f"initial hypergraph has {initial.n} vertices, expected {n}")
        h = as_hypergraph(initial)
    else:
        h = build_hypergraph(n, initial)
    before = FLOW_CALLS.calls
    c = scratch_cactus(h, config)
    return IncrementalState(h, c.lam, c, config=config, rebuild_flows=[FLOW_CALLS.calls - before])


def incremental_insert(state: IncrementalState, members: Iterable[int], weight: int = 1) -> int:
    """Insert a unit hyperedge and return the new λ.

    Surviving mincuts are exactly those not crossing the new hyperedge, so the
    cactus nodes of its members are forced together.  When no mincut
    survives, λ went up and a new phase starts with a fresh construction.
    """
    if weight != 1:
        raise WeightedInsertion("only unit-weight insertions are supported")
    members = sorted(set(members))
    for v in members:
        if not isinstance(v, int) or not 0 <= v < state.n:
            raise UnknownVertex(f"vertex {v!r} not in [0, {state.n})")
    h = state.graph
    state.graph = build_hypergraph(h.n, list(h.edges) + [(members, 1)], h.labels)
    state.insertions += 1
    if len(members) < 2:
        return state.lam
    phi = state.cactus.phi
    contracted = force_together(state.cactus, {phi[h.labels[v]] for v in members})
    if contracted.num_nodes == 1:
        state.phase += 1
        state.stale = True
        _rebuild(state)
    else:
        state.cactus = contracted
    return state.lam
